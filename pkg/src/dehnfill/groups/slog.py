"""Special LOG groups as free-by-cyclic groups.

For a SLOG on ``S`` with distinguished ``s`` and ``t`` the height kernel is
free on ``x_g = g t^-1`` (``g != t``); we name them ``x1 .. x_{n-1}`` for the
remaining vertices in sorted order and ``x_n`` for ``s``.

The twist ``phi(x_g) = t^-1 x_g t = t^-1 g`` is a single valley.  Walking
the ascending-link tree from ``t`` to ``g`` splits it into valleys across
single squares, and each of those equals a peak ``p q^-1 = x_p x_q^-1``:
for the square ``i^l = t'`` the valleys are ``l^-1 i = t' l^-1`` and
``i^-1 l = l t'^-1``.  The inverse uses the descending-link tree the same
way on ``t x_g t^-1 = t g t^-1 t^-1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from ..complexes import check_slog_hypotheses, slog_roles
from ..graphs import InputError, Log
from ..words import Word, free_reduce, inverse
from .oracles import FbcOracle, FreeByCyclic, FreeOracle, GroupOracle, ProductOracle


class DerivationBudgetExceeded(RuntimeError):
    pass


def _tree_path(adj: Dict[str, List[str]], a: str, b: str) -> List[str]:
    prev = {a: None}
    queue = [a]
    for v in queue:
        if v == b:
            break
        for w in adj.get(v, ()):
            if w not in prev:
                prev[w] = v
                queue.append(w)
    if b not in prev:
        raise InputError(f"no link path from {a} to {b}")
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


@dataclass
class Slog:
    gamma: Log
    s: str
    t: str
    a: Tuple[str, ...]
    fbc: FreeByCyclic
    basis_of: Dict[str, str]  # basis letter -> SLOG generator g (x = g t^-1)

    @property
    def x_of(self) -> Dict[str, str]:
        return {g: x for x, g in self.basis_of.items()}

    def s_word_to_fbc(self, w) -> Word:
        """Rewrite an S-word into basis letters and ``t``."""
        xs = self.x_of
        out = []
        for g, e in w:
            if g == self.t:
                out.append((self.t, e))
            elif e == 1:
                out += [(xs[g], 1), (self.t, 1)]
            else:
                out += [(self.t, -1), (xs[g], -1)]
        return tuple(out)

    def fbc_word_to_s(self, w) -> Word:
        out = []
        for g, e in w:
            if g == self.fbc.t:
                out.append((self.t, e))
            else:
                piece = ((self.basis_of[g], 1), (self.t, -1))
                out += piece if e == 1 else inverse(piece)
        return free_reduce(out)

    def oracle(self) -> "SlogOracle":
        return SlogOracle(self)

    def q_oracle(self, u="u", v="v") -> ProductOracle:
        return ProductOracle(SlogOracle(self), FreeOracle((u, v)))


def slog_to_free_by_cyclic(gamma: Log, s=None, t=None, step_budget: int = 10_000,
                           verify: bool = True) -> Slog:
    rep = check_slog_hypotheses(gamma)
    if not rep.passed:
        raise InputError("SLOG hypotheses fail:\n" + str(rep))
    s, t, others = slog_roles(gamma, s, t)
    gens = list(others) + [s]
    basis_of = {f"x{k}": g for k, g in enumerate(gens, start=1)}
    x_of = {g: x for x, g in basis_of.items()}

    def x(g):  # basis word for g t^-1 (empty for t)
        return () if g == t else ((x_of[g], 1),)

    valley: Dict[Tuple[str, str], Word] = {}  # (g, h) for g^-1 h -> basis word
    peak: Dict[Tuple[str, str], Tuple[str, str]] = {}  # (p, q) for p q^-1 -> valley (g, h)
    asc: Dict[str, List[str]] = {}
    desc: Dict[str, List[str]] = {}
    for e in gamma.edges:
        i, tt, l = e.i, e.t, e.l
        # l^-1 i = tt l^-1 and i^-1 l = l tt^-1
        valley[(l, i)] = free_reduce(x(tt) + inverse(x(l)))
        valley[(i, l)] = free_reduce(x(l) + inverse(x(tt)))
        peak[(tt, l)] = (l, i)
        peak[(l, tt)] = (i, l)
        asc.setdefault(i, []).append(l)
        asc.setdefault(l, []).append(i)
        desc.setdefault(tt, []).append(l)
        desc.setdefault(l, []).append(tt)
    steps = 0

    def tick(k):
        nonlocal steps
        steps += k
        if steps > step_budget:
            raise DerivationBudgetExceeded("phi-derivation budget exceeded")

    phi, phi_inv = {}, {}
    for g in gens:
        path = _tree_path(asc, t, g)
        tick(len(path))
        img: list = []
        for a_, b_ in zip(path, path[1:]):
            img += valley[(a_, b_)]
        phi[x_of[g]] = free_reduce(img)
        # t g t^-1 t^-1: the peak g t^-1 becomes a chain of valleys at level 0
        path = _tree_path(desc, g, t)
        tick(len(path))
        s_word = [(t, 1)]
        for p, q in zip(path, path[1:]):
            vg, vh = peak[(p, q)]
            s_word += [(vg, -1), (vh, 1)]
        s_word.append((t, -1))
        # now alternating t, g1^-1, h1, ..., t^-1: read as peaks
        inv: list = []
        for k in range(0, len(s_word), 2):
            (p, _), (q, _) = s_word[k], s_word[k + 1]
            inv += x(p) + inverse(x(q))
        phi_inv[x_of[g]] = free_reduce(inv)
    fbc = FreeByCyclic(tuple(basis_of), phi, phi_inv, t="t")
    slog = Slog(gamma, s, t, tuple(others), fbc, basis_of)
    if verify:
        orc = FbcOracle(fbc)
        for e in gamma.edges:
            rel = ((e.l, -1), (e.i, 1), (e.l, 1), (e.t, -1))
            if not orc.is_trivial(slog.s_word_to_fbc(rel)):
                raise InputError(f"derived twist fails relator of edge {e}")
    return slog


class SlogOracle(GroupOracle):
    """Word problem in the SLOG group, spelled in its own generators."""
    name = "slog"

    def __init__(self, slog: Slog):
        self.slog = slog
        self.inner = FbcOracle(slog.fbc)
        self.generators = tuple(slog.gamma.vertices)
        self._img = {}
        for g in self.generators:
            w = slog.s_word_to_fbc(((g, 1),))
            self._img[(g, 1)] = w
            self._img[(g, -1)] = inverse(w)

    @property
    def identity(self):
        return self.inner.identity

    def mul_letter(self, key, x):
        for y in self._img[tuple(x)]:
            key = self.inner.mul_letter(key, y)
        return key

    def to_word(self, key):
        return self.slog.fbc_word_to_s(self.inner.to_word(key))
