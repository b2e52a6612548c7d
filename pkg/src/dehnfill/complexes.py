"""One-vertex cube complexes, their vertex links and the link conditions.

A ``CubeComplex`` has a single vertex, one oriented edge per generator,
squares that are either commutation squares ``x y x^-1 y^-1`` or LOG squares
``i l t^-1 l^-1`` (the relation ``i^l = t``), 3-cubes on pairwise commuting
triples, and prisms (a LOG square times a circle).

Link vertices are named ``g+`` (the outgoing end of edge ``g``) and ``g-``
(the incoming end).  Going out along ``g+`` raises the height, so the
ascending link is spanned by the ``+`` vertices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .graphs import (
    FlagComplex2, InputError, Log, Report, SimpleGraph, ThompsonComplexData,
    computable_checks_pass, girth, is_tree, verify_thompson_input,
)
from .words import Word

COMM = "comm"
LOGSQ = "log"


@dataclass(frozen=True, order=True)
class Square:
    kind: str
    gens: Tuple[str, ...]  # (x, y) sorted for comm; (i, t, l) for log

    @staticmethod
    def comm(x: str, y: str) -> "Square":
        if x == y:
            raise InputError(f"commutation square needs two generators, got {x}")
        return Square(COMM, tuple(sorted((x, y))))

    @staticmethod
    def log(i: str, t: str, l: str) -> "Square":
        if l in (i, t):
            raise InputError(f"LOG square ({i},{t};{l}) has label equal to an endpoint")
        return Square(LOGSQ, (i, t, l))

    @property
    def boundary_word(self) -> Word:
        if self.kind == COMM:
            x, y = self.gens
            return ((x, 1), (y, 1), (x, -1), (y, -1))
        i, t, l = self.gens
        return ((i, 1), (l, 1), (t, -1), (l, -1))

    @property
    def generator_set(self) -> FrozenSet[str]:
        return frozenset(self.gens)

    @property
    def cell_id(self) -> str:
        tag = "C" if self.kind == COMM else "L"
        return f"{tag}:{','.join(self.gens)}"

    def diagonal(self) -> Word:
        """Height-zero element across the square: ``x y^-1`` or ``t l^-1``."""
        if self.kind == COMM:
            x, y = self.gens
            return ((x, 1), (y, -1))
        i, t, l = self.gens
        return ((t, 1), (l, -1))

    def corner_edges(self) -> List[Tuple[str, str]]:
        """Link edges, one per corner of the boundary word.

        At a corner the incoming letter leaves through its terminal end
        (``g-`` if it was read forwards) and the outgoing letter through its
        initial end (``g+`` if read forwards).
        """
        b = self.boundary_word
        out = []
        for k in range(4):
            (g1, e1), (g2, e2) = b[k], b[(k + 1) % 4]
            out.append((g1 + ("-" if e1 == 1 else "+"), g2 + ("+" if e2 == 1 else "-")))
        return out

    def to_json(self):
        if self.kind == COMM:
            return {"kind": COMM, "gens": list(self.gens)}
        i, t, l = self.gens
        return {"kind": LOGSQ, "i": i, "t": t, "l": l}

    @staticmethod
    def from_json(d) -> "Square":
        if d["kind"] == COMM:
            return Square.comm(*d["gens"])
        return Square.log(d["i"], d["t"], d["l"])


@dataclass(frozen=True)
class CubeComplex:
    generators: Tuple[str, ...]
    squares: Tuple[Square, ...]
    cubes3: Tuple[Tuple[str, str, str], ...] = ()
    prisms: Tuple[Tuple[Square, str], ...] = ()
    tags: Tuple[Tuple[str, Tuple[str, ...]], ...] = ()
    name: str = ""

    def __post_init__(self):
        gens = tuple(sorted(set(self.generators)))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "squares", tuple(sorted(set(self.squares))))
        object.__setattr__(self, "cubes3", tuple(sorted({tuple(sorted(c)) for c in self.cubes3})))
        object.__setattr__(self, "prisms", tuple(sorted(set(self.prisms))))
        gs = set(gens)
        comm = {s.generator_set for s in self.squares if s.kind == COMM}
        for s in self.squares:
            if not set(s.gens) <= gs:
                raise InputError(f"square {s.cell_id} uses unknown generators")
        for c in self.cubes3:
            for a, b in itertools.combinations(c, 2):
                if frozenset((a, b)) not in comm:
                    raise InputError(f"3-cube {c} lacks commutation square {a},{b}")
        for sq, w in self.prisms:
            if sq.kind != LOGSQ or sq not in self.squares:
                raise InputError("prism base must be a LOG square of the complex")
            for g in set(sq.gens):
                if frozenset((g, w)) not in comm:
                    raise InputError(f"prism {sq.cell_id}|{w} lacks square {g},{w}")

    @property
    def tag_map(self) -> Dict[str, Tuple[str, ...]]:
        return dict(self.tags)

    @property
    def comm_squares(self):
        return [s for s in self.squares if s.kind == COMM]

    @property
    def log_squares(self):
        return [s for s in self.squares if s.kind == LOGSQ]

    def commutes(self, x: str, y: str) -> bool:
        return Square(COMM, tuple(sorted((x, y)))) in set(self.squares)

    def counts(self) -> dict:
        return {"generators": len(self.generators), "squares": len(self.squares),
                "comm_squares": len(self.comm_squares), "log_squares": len(self.log_squares),
                "cubes3": len(self.cubes3), "prisms": len(self.prisms)}

    def cell_ids(self) -> List[str]:
        ids = [f"E:{g}" for g in self.generators]
        ids += [s.cell_id for s in self.squares]
        ids += [f"K:{','.join(c)}" for c in self.cubes3]
        ids += [f"P:{','.join(s.gens)}|{w}" for s, w in self.prisms]
        return ids

    def relators(self) -> List[Word]:
        return [s.boundary_word for s in self.squares]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.generators),
            "squares": [s.to_json() for s in self.squares],
            "cubes3": [list(c) for c in self.cubes3],
            "prisms": [{"square": s.to_json(), "w": w} for s, w in self.prisms],
            "tags": {k: list(v) for k, v in self.tags},
            "cell_ids": self.cell_ids(),
        }

    @classmethod
    def from_json(cls, d) -> "CubeComplex":
        return cls(
            tuple(d["generators"]),
            tuple(Square.from_json(s) for s in d.get("squares", ())),
            tuple(tuple(c) for c in d.get("cubes3", ())),
            tuple((Square.from_json(p["square"]), p["w"]) for p in d.get("prisms", ())),
            tuple(sorted((k, tuple(v)) for k, v in d.get("tags", {}).items())),
            d.get("name", ""),
        )


def rose(gens, name="rose") -> CubeComplex:
    return CubeComplex(tuple(gens), (), name=name)


def salvetti(g: SimpleGraph) -> CubeComplex:
    """One square per edge and one 3-cube per triangle of the graph."""
    squares = tuple(Square.comm(a, b) for a, b in g.sorted_edges())
    return CubeComplex(g.vertices, squares, tuple(g.cliques(3)), name="salvetti")


def log_complex(gamma: Log) -> CubeComplex:
    squares = tuple(Square.log(e.i, e.t, e.l) for e in gamma.edges)
    return CubeComplex(gamma.vertices, squares, name="log")


def product_with_wedge(c: CubeComplex, k: int = 2, names=None) -> CubeComplex:
    """Product of ``c`` with a wedge of ``k`` circles."""
    if k < 1:
        raise InputError("wedge needs at least one circle")
    names = list(names) if names is not None else [f"u{j}" for j in range(1, k + 1)]
    if len(names) != k or set(names) & set(c.generators):
        raise InputError("wedge generator names must be fresh and number k")
    if c.cubes3 or c.prisms:
        raise InputError("product would create cubes of dimension 4")
    squares = list(c.squares)
    squares += [Square.comm(g, w) for g in c.generators for w in names]
    cubes = [tuple(s.gens) + (w,) for s in c.comm_squares for w in names]
    prisms = [(s, w) for s in c.log_squares for w in names]
    return CubeComplex(c.generators + tuple(names), tuple(squares), tuple(cubes),
                       tuple(prisms), name=f"{c.name}x wedge{k}")


# ----------------------------------------------------------------- links

@dataclass(frozen=True)
class VertexLink:
    complex: FlagComplex2
    edge_multiplicity: Tuple[Tuple[Tuple[str, str], int], ...] = ()

    def ascending(self) -> FlagComplex2:
        return self.complex.full_subcomplex([v for v in self.complex.vertices if v.endswith("+")])

    def descending(self) -> FlagComplex2:
        return self.complex.full_subcomplex([v for v in self.complex.vertices if v.endswith("-")])

    def repeated_edges(self):
        return [e for e, m in self.edge_multiplicity if m > 1]

    def girth(self):
        """Girth of the 1-skeleton, counting repeated link edges as 2-cycles."""
        if self.repeated_edges():
            return 2
        return girth(self.complex.graph)


def link(c: CubeComplex) -> VertexLink:
    verts = [g + s for g in c.generators for s in "+-"]
    mult: Dict[Tuple[str, str], int] = {}
    for sq in c.squares:
        for a, b in sq.corner_edges():
            if a == b:
                raise InputError(f"square {sq.cell_id} produces a link loop at {a}")
            key = tuple(sorted((a, b)))
            mult[key] = mult.get(key, 0) + 1
    tris = set()
    for cube in c.cubes3:
        for signs in itertools.product("+-", repeat=3):
            tris.add(frozenset(g + s for g, s in zip(cube, signs)))
    for sq, w in c.prisms:
        for a, b in sq.corner_edges():
            for s in "+-":
                tris.add(frozenset((a, b, w + s)))
    for t in tris:
        for a, b in itertools.combinations(sorted(t), 2):
            if (a, b) not in mult:
                raise InputError(f"link triangle {sorted(t)} misses edge {a},{b}")
    return VertexLink(FlagComplex2(verts, list(mult), tris), tuple(sorted(mult.items())))


def ascending_link(lk: VertexLink) -> FlagComplex2:
    return lk.ascending()


def descending_link(lk: VertexLink) -> FlagComplex2:
    return lk.descending()


def strip_signs(c: FlagComplex2) -> FlagComplex2:
    """Rename ``g+``/``g-`` link vertices back to ``g``."""
    return c.relabel({v: v[:-1] for v in c.vertices})


def check_slog_hypotheses(gamma: Log) -> Report:
    """Link conditions of the LOG theorem: ascending and descending links
    are trees and the full link has girth at least 4."""
    lk = link(log_complex(gamma))
    rep = Report("LOG link conditions")
    alk, dlk = lk.ascending(), lk.descending()
    rep.add("ascending link is a tree", is_tree(alk.graph),
            f"{len(alk.vertices)} vertices, {len(alk.edges)} edges")
    rep.add("descending link is a tree", is_tree(dlk.graph),
            f"{len(dlk.vertices)} vertices, {len(dlk.edges)} edges")
    g = lk.girth()
    rep.add("link girth >= 4", g == "infinite" or g >= 4, f"girth {g}")
    return rep


# ---------------------------------------------------------------- SLOG roles

def slog_roles(gamma: Log, s: Optional[str] = None, t: Optional[str] = None):
    """Identify ``(s, t, [a_1, ..., a_{n-1}])`` in a special LOG.

    ``s`` must label exactly one edge, a loop at ``t``, and occur in no other
    edge.  When not given, the unique such vertex is used (a vertex literally
    named ``s`` wins ties).
    """
    def ok(sv):
        uses = [e for e in gamma.edges if sv in (e.i, e.t, e.l)]
        return len(uses) == 1 and uses[0].l == sv and uses[0].i == uses[0].t
    if s is None:
        cands = [v for v in gamma.vertices if ok(v)]
        if len(cands) > 1 and "s" in cands:
            cands = ["s"]
        if len(cands) != 1:
            raise InputError(f"cannot identify the isolated vertex s (candidates {cands})")
        s = cands[0]
    elif not ok(s):
        raise InputError(f"{s} is not an isolated vertex labelling a single loop")
    loop_t = next(e.t for e in gamma.edges if e.l == s)
    if t is not None and t != loop_t:
        raise InputError(f"the loop labelled {s} sits at {loop_t}, not {t}")
    others = [v for v in gamma.vertices if v not in (s, loop_t)]
    return s, loop_t, others


def make_slog(gamma: Log, t: str, s: str = "s") -> Log:
    """Add an isolated vertex ``s`` and a loop at ``t`` labelled ``s``."""
    if t not in gamma.vertices:
        raise InputError(f"{t} is not a vertex")
    if s in gamma.vertices:
        raise InputError(f"name {s} is not fresh")
    return Log(gamma.vertices + (s,), list(gamma.edges) + [(t, t, s)])


# ---------------------------------------------------------------- amalgam

@dataclass(frozen=True)
class Amalgam:
    complex: CubeComplex
    gamma: Log
    Y: ThompsonComplexData
    s: str
    t: str
    a: Tuple[str, ...]
    u: str = "u"
    v: str = "v"
    y_names: Tuple[Tuple[str, str], ...] = ()  # (amalgam generator, Y vertex)
    warnings: Tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.a) + 1

    @property
    def tags(self):
        return self.complex.tag_map

    def piece_generators(self, i: int) -> Tuple[str, ...]:
        return self.tags[f"A{i}"]

    def y_letters(self, i: int) -> List[str]:
        return [g for g, _ in self.y_names if g.startswith(f"y{i}_")]

    def is_y_letter(self, g: str) -> bool:
        return g in dict(self.y_names)

    def piece_of_y_letter(self, g: str) -> int:
        return int(g[1:].split("_")[0])

    def A_map(self, i: int) -> Dict[str, str]:
        """Y vertex -> amalgam generator for piece ``i``."""
        ya, yu, ys, yv = self.Y.marked
        m = {ya: self.a[i - 1], yu: self.u, ys: self.s, yv: self.v}
        for g, yv_ in self.y_names:
            if g.startswith(f"y{i}_"):
                m[yv_] = g
        return m

    def Q_complex(self) -> CubeComplex:
        return product_with_wedge(log_complex(self.gamma), 2, (self.u, self.v))

    def A_graph(self, i: int) -> SimpleGraph:
        m = self.A_map(i)
        g = self.Y.complex.graph
        return SimpleGraph([m[x] for x in g.vertices], [(m[a], m[b]) for a, b in g.sorted_edges()])


def amalgam_complex(gamma: Log, Y: ThompsonComplexData, allow_unasserted=False,
                    s: Optional[str] = None, t: Optional[str] = None) -> Amalgam:
    """Glue one copy of the Salvetti complex of Y to X_B x R_2 for each
    non-special vertex ``a_i`` of the SLOG, along ``F(a_i, s) x F(u, v)``."""
    rep = check_slog_hypotheses(gamma)
    if not rep.passed:
        raise InputError("SLOG hypotheses fail:\n" + str(rep))
    s, t, others = slog_roles(gamma, s, t)
    yrep = verify_thompson_input(Y)
    warnings = []
    if not computable_checks_pass(yrep):
        raise InputError("marked flag complex fails checks:\n" + str(yrep))
    if not Y.pi1_simple_infinite_order_asserted:
        if not allow_unasserted:
            raise InputError("the marked flag complex carries no simplicity assertion "
                             "(pass allow_unasserted to build anyway)")
        warnings.append("built from a flag complex without the simplicity assertion")
    u, v = "u", "v"
    if {u, v} & set(gamma.vertices):
        raise InputError("generator names u and v are reserved for the free factor")
    Q = product_with_wedge(log_complex(gamma), 2, (u, v))
    extra = Y.extra_vertices
    y_names = []
    squares = list(Q.squares)
    cubes = list(Q.cubes3)
    tags = {"Q": Q.generators}
    used = set(Q.generators)
    ya, yu, ys, yv = Y.marked
    for i, ai in enumerate(others, start=1):
        m = {ya: ai, yu: u, ys: s, yv: v}
        for j, y in enumerate(extra, start=1):
            name = f"y{i}_{j}"
            if name in used:
                raise InputError(f"generator name clash on {name}")
            m[y] = name
            y_names.append((name, y))
        used |= set(m.values())
        for p, q in Y.complex.sorted_edges():
            squares.append(Square.comm(m[p], m[q]))
        for tri in Y.complex.sorted_triangles():
            cubes.append(tuple(m[x] for x in tri))
        tags[f"A{i}"] = tuple(sorted(m.values()))
        tags[f"E{i}"] = tuple(sorted((ai, s, u, v)))
    cx = CubeComplex(tuple(sorted(used)), tuple(squares), tuple(cubes), Q.prisms,
                     tuple(sorted(tags.items())), name="amalgam")
    return Amalgam(cx, gamma, Y, s, t, tuple(others), u, v, tuple(y_names), tuple(warnings))


def glued_ascending_link(am: Amalgam):
    """Ascending link of the amalgam complex, its H1, and the suspension
    structure of the Q part."""
    from .homology import h1_smith

    alk = link(am.complex).ascending()
    h1 = h1_smith(alk)
    rep = Report("glued ascending link")
    rep.add("H1 = 0", h1.is_trivial(), str(h1))
    qalk = link(am.Q_complex()).ascending()
    balk = link(log_complex(am.gamma)).ascending()
    rep.add("Q ascending link is the suspension of the B ascending link",
            _is_suspension(qalk, balk, am.u + "+", am.v + "+"),
            f"suspension points {am.u}+, {am.v}+")
    rep.add("B ascending link is a tree", is_tree(balk.graph))
    return alk, h1, rep


def _is_suspension(c: FlagComplex2, base: FlagComplex2, p: str, q: str) -> bool:
    if set(c.vertices) != set(base.vertices) | {p, q}:
        return False
    edges = {frozenset(e) for e in base.edges}
    edges |= {frozenset((x, w)) for x in base.vertices for w in (p, q)}
    tris = {frozenset(tuple(e) + (w,)) for e in base.edges for w in (p, q)}
    return set(c.edges) == edges and set(c.triangles) == tris
