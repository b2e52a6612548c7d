"""Combinatorial inputs: simple graphs, 2-dimensional simplicial (flag)
complexes, labelled oriented graphs, and the marked complex data used to
build the Artin pieces.

Vertex ids are strings; every collection is kept in sorted order so output
is deterministic.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple

INFINITE = "infinite"


class InputError(ValueError):
    """Raised when combinatorial input violates a structural invariant."""


def _edge(a: str, b: str) -> FrozenSet[str]:
    return frozenset((a, b))


def _sorted_pair(e) -> Tuple[str, str]:
    a, b = sorted(e)
    return a, b


@dataclass(frozen=True)
class SimpleGraph:
    vertices: Tuple[str, ...]
    edges: FrozenSet[FrozenSet[str]]

    def __init__(self, vertices: Iterable[str], edges: Iterable[Iterable[str]] = ()):
        verts = [str(v) for v in vertices]
        if len(set(verts)) != len(verts):
            raise InputError("duplicate vertex ids")
        vset = set(verts)
        es = set()
        for e in edges:
            a, b = (str(x) for x in e)
            if a == b:
                raise InputError(f"loop at {a}")
            if a not in vset or b not in vset:
                raise InputError(f"edge {a}-{b} uses an unknown vertex")
            pair = _edge(a, b)
            if pair in es:
                raise InputError(f"duplicate edge {a}-{b}")
            es.add(pair)
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        object.__setattr__(self, "edges", frozenset(es))

    def has_edge(self, a: str, b: str) -> bool:
        return _edge(a, b) in self.edges

    def neighbors(self, v: str) -> List[str]:
        return sorted(w for e in self.edges if v in e for w in e if w != v)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def sorted_edges(self) -> List[Tuple[str, str]]:
        return sorted(_sorted_pair(e) for e in self.edges)

    def components(self) -> List[List[str]]:
        adj = self.adjacency()
        seen, comps = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            comp, queue = [], deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def induced(self, verts: Iterable[str]) -> "SimpleGraph":
        vs = set(verts)
        return SimpleGraph(vs, [tuple(e) for e in self.edges if e <= vs])

    def cliques(self, k: int) -> List[Tuple[str, ...]]:
        adj = self.adjacency()
        out = []
        for combo in itertools.combinations(self.vertices, k):
            if all(b in adj[a] for a, b in itertools.combinations(combo, 2)):
                out.append(combo)
        return out

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.sorted_edges()]}


@dataclass(frozen=True)
class FlagComplex2:
    """A simplicial complex of dimension at most 2.

    Downward closure is enforced; flagness is checked by :func:`is_flag`.
    """

    vertices: Tuple[str, ...]
    edges: FrozenSet[FrozenSet[str]]
    triangles: FrozenSet[FrozenSet[str]]

    def __init__(self, vertices, edges=(), triangles=()):
        g = SimpleGraph(vertices, edges)
        tris = set()
        for t in triangles:
            t = frozenset(str(x) for x in t)
            if len(t) != 3:
                raise InputError(f"triangle {sorted(t)} does not have 3 vertices")
            for a, b in itertools.combinations(sorted(t), 2):
                if not g.has_edge(a, b):
                    raise InputError(f"triangle {sorted(t)} is missing edge {a}-{b}")
            tris.add(t)
        object.__setattr__(self, "vertices", g.vertices)
        object.__setattr__(self, "edges", g.edges)
        object.__setattr__(self, "triangles", frozenset(tris))

    @property
    def graph(self) -> SimpleGraph:
        return SimpleGraph(self.vertices, [tuple(e) for e in self.edges])

    def sorted_edges(self) -> List[Tuple[str, str]]:
        return sorted(_sorted_pair(e) for e in self.edges)

    def sorted_triangles(self) -> List[Tuple[str, str, str]]:
        return sorted(tuple(sorted(t)) for t in self.triangles)

    def dimension(self) -> int:
        if self.triangles:
            return 2
        if self.edges:
            return 1
        return 0 if self.vertices else -1

    def full_subcomplex(self, verts: Iterable[str]) -> "FlagComplex2":
        vs = set(verts)
        return FlagComplex2(
            vs,
            [tuple(e) for e in self.edges if e <= vs],
            [tuple(t) for t in self.triangles if t <= vs],
        )

    def relabel(self, mapping: dict) -> "FlagComplex2":
        f = lambda v: mapping.get(v, v)
        return FlagComplex2(
            [f(v) for v in self.vertices],
            [tuple(f(v) for v in e) for e in self.edges],
            [tuple(f(v) for v in t) for t in self.triangles],
        )

    def chain_complex(self):
        """``(n_vertices, edge endpoints, face boundaries)`` in index form.

        Edges are oriented from the smaller to the larger id; a triangle
        ``a<b<c`` has boundary ``[b,c] - [a,c] + [a,b]``.
        """
        vidx = {v: i for i, v in enumerate(self.vertices)}
        edges = self.sorted_edges()
        eidx = {e: i for i, e in enumerate(edges)}
        faces = []
        for a, b, c in self.sorted_triangles():
            faces.append([(eidx[(b, c)], 1), (eidx[(a, c)], -1), (eidx[(a, b)], 1)])
        return len(self.vertices), [(vidx[a], vidx[b]) for a, b in edges], faces

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.sorted_edges()],
            "triangles": [list(t) for t in self.sorted_triangles()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FlagComplex2":
        return cls(data["vertices"], data.get("edges", ()), data.get("triangles", ()))

    def isomorphic_to(self, other: "FlagComplex2") -> bool:
        """Brute-force simplicial isomorphism test (desk-scale inputs)."""
        if (len(self.vertices), len(self.edges), len(self.triangles)) != (
            len(other.vertices), len(other.edges), len(other.triangles)):
            return False
        import networkx as nx

        def as_nx(c):
            g = nx.Graph()
            g.add_nodes_from(c.vertices)
            g.add_edges_from(c.sorted_edges())
            return g

        gm = nx.algorithms.isomorphism.GraphMatcher(as_nx(self), as_nx(other))
        other_tris = set(other.triangles)
        for m in gm.isomorphisms_iter():
            if all(frozenset(m[v] for v in t) in other_tris for t in self.triangles):
                return True
        return False


@dataclass(frozen=True)
class LogEdge:
    i: str
    t: str
    l: str


@dataclass(frozen=True)
class Log:
    """Labelled oriented graph: edge ``e`` encodes the relation ``i^l = t``."""

    vertices: Tuple[str, ...]
    edges: Tuple[LogEdge, ...]

    def __init__(self, vertices: Iterable[str], edges: Iterable = ()):
        verts = tuple(sorted(str(v) for v in vertices))
        if len(set(verts)) != len(verts):
            raise InputError("duplicate vertex ids")
        vset = set(verts)
        es = []
        for e in edges:
            if isinstance(e, LogEdge):
                i, t, l = e.i, e.t, e.l
            elif isinstance(e, dict):
                i, t, l = str(e["i"]), str(e["t"]), str(e["l"])
            else:
                i, t, l = (str(x) for x in e)
            for v in (i, t, l):
                if v not in vset:
                    raise InputError(f"LOG edge uses unknown vertex {v}")
            if l == i or l == t:
                raise InputError(f"LOG edge ({i},{t};{l}) has label equal to an endpoint")
            es.append(LogEdge(i, t, l))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(es))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"i": e.i, "t": e.t, "l": e.l} for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Log":
        return cls(data["vertices"], data.get("edges", ()))


@dataclass(frozen=True)
class ThompsonComplexData:
    complex: FlagComplex2
    marked: Tuple[str, str, str, str]  # the 4-cycle a, u, s, v
    pi1_simple_infinite_order_asserted: bool = False
    provenance: str = ""

    def __post_init__(self):
        if len(self.marked) != 4 or len(set(self.marked)) != 4:
            raise InputError("marked path must be 4 distinct vertices")
        for v in self.marked:
            if v not in self.complex.vertices:
                raise InputError(f"marked vertex {v} not in complex")

    @property
    def a(self):
        return self.marked[0]

    @property
    def extra_vertices(self) -> List[str]:
        return [v for v in self.complex.vertices if v not in self.marked]

    def to_json(self) -> dict:
        d = self.complex.to_json()
        d["marked"] = list(self.marked)
        d["pi1_simple_infinite_order_asserted"] = self.pi1_simple_infinite_order_asserted
        if self.provenance:
            d["provenance"] = self.provenance
        return d

    @classmethod
    def from_json(cls, data: dict) -> "ThompsonComplexData":
        return cls(
            FlagComplex2.from_json(data),
            tuple(str(v) for v in data["marked"]),
            bool(data.get("pi1_simple_infinite_order_asserted", False)),
            data.get("provenance", ""),
        )


def flag_completion(g: SimpleGraph) -> FlagComplex2:
    return FlagComplex2(g.vertices, [tuple(e) for e in g.edges], g.cliques(3))


def is_flag(c: FlagComplex2) -> Tuple[bool, Optional[Tuple[str, ...]]]:
    """Flag up to dimension 2: every 3-clique is a triangle and no 4-clique
    exists.  Returns ``(ok, witness)``."""
    g = c.graph
    for clique in g.cliques(3):
        if frozenset(clique) not in c.triangles:
            return False, clique
    four = g.cliques(4)
    if four:
        return False, four[0]
    return True, None


def girth(g: SimpleGraph):
    """Length of a shortest cycle, or ``INFINITE`` for forests."""
    adj = g.adjacency()
    best = None
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    cyc = dist[x] + dist[y] + 1
                    if best is None or cyc < best:
                        best = cyc
    return INFINITE if best is None else best


def is_tree(g: SimpleGraph) -> bool:
    return len(g.vertices) > 0 and g.is_connected() and len(g.edges) == len(g.vertices) - 1


def is_forest(g: SimpleGraph) -> bool:
    return len(g.edges) == len(g.vertices) - len(g.components())


def is_induced_four_cycle(g: SimpleGraph, cyc: Tuple[str, str, str, str]) -> bool:
    a, u, s, v = cyc
    ring = [(a, u), (u, s), (s, v), (v, a)]
    return all(g.has_edge(x, y) for x, y in ring) and not g.has_edge(a, s) and not g.has_edge(u, v)


@dataclass
class Report:
    """An ordered list of named pass/fail checks plus free-form notes."""

    title: str
    checks: List[Tuple[str, bool, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def __getitem__(self, name: str) -> bool:
        for n, ok, _ in self.checks:
            if n == name:
                return ok
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks],
            "notes": list(self.notes),
        }

    def __str__(self) -> str:
        lines = [self.title]
        for n, ok, d in self.checks:
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {n}" + (f": {d}" if d else ""))
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def verify_thompson_input(d: ThompsonComplexData) -> Report:
    """Run every computable hypothesis check on a marked flag complex.

    The simplicity of the fundamental group (and the infinite order of the
    marked loop) cannot be computed; it is echoed from the input flag, and
    the report only passes when that flag is set.
    """
    from .homology import h1_smith

    c = d.complex
    rep = Report("marked flag complex checks")
    rep.add("connected", c.graph.is_connected())
    ok, witness = is_flag(c)
    rep.add("flag", ok, "" if ok else f"violating clique {list(witness)}")
    rep.add("2-dimensional", c.dimension() <= 2)
    h1 = h1_smith(c)
    rep.add("H1 = 0", h1.is_trivial(), str(h1))
    rep.add("marked induced 4-cycle", is_induced_four_cycle(c.graph, d.marked),
            "-".join(d.marked))
    rep.add("pi1 simple with infinite-order marked loop (asserted, not computed)",
            d.pi1_simple_infinite_order_asserted)
    return rep


def computable_checks_pass(rep: Report) -> bool:
    return all(ok for n, ok, _ in rep.checks if not n.startswith("pi1"))


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
