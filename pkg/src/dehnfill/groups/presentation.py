"""Finite presentations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from ..graphs import InputError, Log, SimpleGraph
from ..words import Word, as_word, cyclic_reduce, format_word, free_reduce


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]
    # True when the presentation complex is known to be aspherical (so
    # cellular 2-chains with given boundary are unique); asserted, not checked
    aspherical: bool = False
    name: str = ""

    def __post_init__(self):
        gens = set(self.generators)
        rels = []
        for r in self.relators:
            r = tuple(r)
            if cyclic_reduce(r) != r or free_reduce(r) != r:
                raise InputError(f"relator {format_word(r)} is not cyclically reduced")
            if not r:
                raise InputError("empty relator")
            for g, _ in r:
                if g not in gens:
                    raise InputError(f"relator uses unknown generator {g}")
            rels.append(r)
        object.__setattr__(self, "relators", tuple(rels))
        object.__setattr__(self, "generators", tuple(self.generators))

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def to_json(self):
        return {"gens": list(self.generators),
                "rels": [format_word(r) for r in self.relators],
                "aspherical": self.aspherical}

    @classmethod
    def from_json(cls, d):
        return cls(tuple(d["gens"]), tuple(as_word(r) for r in d.get("rels", ())),
                   bool(d.get("aspherical", False)), d.get("name", ""))


def commutator(x: str, y: str) -> Word:
    return ((x, 1), (y, 1), (x, -1), (y, -1))


def raag_presentation(g: SimpleGraph) -> Presentation:
    # RAAG presentation complexes are aspherical exactly when the flag
    # complex has no triangles (otherwise the Salvetti complex needs cubes)
    no_triangles = not g.cliques(3)
    return Presentation(g.vertices, tuple(commutator(a, b) for a, b in g.sorted_edges()),
                        aspherical=no_triangles, name="raag")


def log_presentation(gamma: Log, aspherical=None) -> Presentation:
    """Relator ``l^-1 i l t^-1`` for each edge ``i^l = t``.

    Under the LOG link conditions the presentation complex is locally
    CAT(0), hence aspherical; by default the flag is set from that check.
    """
    if aspherical is None:
        from ..complexes import check_slog_hypotheses
        aspherical = check_slog_hypotheses(gamma).passed
    rels = tuple(((e.l, -1), (e.i, 1), (e.l, 1), (e.t, -1)) for e in gamma.edges)
    return Presentation(gamma.vertices, rels, aspherical=aspherical, name="log")


def free_presentation(gens) -> Presentation:
    return Presentation(tuple(gens), (), aspherical=True, name="free")


def d_presentation(fbc, t_names=("t1", "t2")) -> Presentation:
    """``<x_i, t_1, t_2 | t_r^-1 x_i t_r = phi(x_i)>`` for the double of a
    free-by-cyclic group (a graph of roses, hence aspherical)."""
    rels = []
    for x in fbc.basis:
        img = fbc.phi[x]
        for tr in t_names:
            rels.append(cyclic_reduce(((tr, -1), (x, 1), (tr, 1)) +
                                      tuple((g, -e) for g, e in reversed(img))))
    return Presentation(tuple(fbc.basis) + tuple(t_names), tuple(rels), aspherical=True,
                        name="double")
