"""Presentations and word-problem oracles."""
from .amalgam import AmalgamOracle, amalgam_oracle
from .folding import FoldedGraph, generates_free_group, in_subgroup
from .oracles import (
    BudgetExceeded, DoubleOracle, FbcOracle, FreeByCyclic, FreeOracle, GroupOracle,
    ProductOracle, RaagOracle, fbc_oracle, free_oracle, product_oracle, raag_oracle,
)
from .presentation import (
    Presentation, d_presentation, free_presentation, log_presentation, raag_presentation,
)
from .slog import DerivationBudgetExceeded, Slog, SlogOracle, slog_to_free_by_cyclic


def height(w) -> int:
    """Image under the homomorphism sending every generator to 1."""
    return sum(e for _, e in w)


def membership_E_in_A(oracle: AmalgamOracle, i: int, w) -> bool:
    return oracle.membership_E_in_A(i, w)


def membership_E_in_Q(oracle: AmalgamOracle, i: int, q) -> bool:
    return oracle.membership_E_in_Q(i, q)
