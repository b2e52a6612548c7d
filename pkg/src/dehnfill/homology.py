"""Cellular chains on finite 2-complexes, H1, and minimum-mass fillings.

``Complex2`` is the common currency: level-set balls, Cayley-complex balls
and small simplicial complexes all end up as one.  Vertices, edges and faces
are keyed by hashable objects so that lazily built complexes can be extended
without renumbering.  Edges are oriented tail -> head; a face stores its
boundary as a consolidated list of ``(edge index, coefficient)``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from . import lp
from .snf import sparse_invariant_factors

EXACT = "exact"
INFEASIBLE = "infeasible-in-ball"
BUDGET = "budget-exceeded"


def fmt_key(key) -> str:
    """Stable string form of a cell key (words print as ``a b^-1``)."""
    if isinstance(key, str):
        return key
    if isinstance(key, tuple):
        if all(isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], str)
               and x[1] in (1, -1) for x in key):
            if not key:
                return "1"
            return " ".join(g if e == 1 else f"{g}^-1" for g, e in key)
        return "(" + ",".join(fmt_key(x) for x in key) + ")"
    if isinstance(key, frozenset):
        return "{" + ",".join(sorted(fmt_key(x) for x in key)) + "}"
    return str(key)


@dataclass(frozen=True)
class H1Group:
    """Finitely generated abelian group Z^rank + sum of Z/t."""
    rank: int
    torsion: tuple = ()

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _components(nv, edges) -> int:
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = nv
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps


def h1_from_chain_complex(nv, edges, faces) -> H1Group:
    """H1 of a 2-complex given as vertex count, ``[(tail, head)]`` edges and
    faces as lists of ``(edge, coefficient)``."""
    rank_d1 = nv - _components(nv, edges)
    cols = []
    for bd in faces:
        col: Dict[int, int] = {}
        for e, s in bd:
            col[e] = col.get(e, 0) + s
        cols.append(col)
    factors = sparse_invariant_factors(cols, len(edges))
    rank = len(edges) - rank_d1 - len(factors)
    return H1Group(rank, tuple(f for f in factors if f > 1))


def h1_smith(obj) -> H1Group:
    """H1 with integer coefficients via Smith normal form of the boundary
    map.  Accepts anything with a ``chain_complex()`` method (simplicial
    complexes, ``Complex2``)."""
    nv, edges, faces = obj.chain_complex()
    return h1_from_chain_complex(nv, [(a, b) for a, b, *_ in edges], faces)


class Complex2:
    """A finite 2-complex with keyed cells."""

    def __init__(self, name: str = ""):
        self.name = name
        self.vertices: list = []
        self.edges: list = []  # (tail index, head index, label)
        self.faces: list = []  # tuple of (edge index, coefficient)
        self.vertex_keys = self.vertices
        self.edge_keys: list = []
        self.face_keys: list = []
        self._v: dict = {}
        self._e: dict = {}
        self._f: dict = {}
        self._solver = None
        self._ids = None
        self.partial = False
        self.meta: dict = {}

    # construction
    def add_vertex(self, key) -> int:
        i = self._v.get(key)
        if i is None:
            i = len(self.vertices)
            self.vertices.append(key)
            self._v[key] = i
            self._invalidate()
        return i

    def add_edge(self, tail, head, label="", key=None) -> int:
        key = (tail, head, label) if key is None else key
        i = self._e.get(key)
        if i is None:
            t, h = self.add_vertex(tail), self.add_vertex(head)
            i = len(self.edges)
            self.edges.append((t, h, label))
            self.edge_keys.append(key)
            self._e[key] = i
            self._invalidate()
        return i

    def add_face(self, boundary: Iterable, key) -> int:
        i = self._f.get(key)
        if i is None:
            acc: Dict[int, int] = {}
            for e, s in boundary:
                acc[e] = acc.get(e, 0) + s
            bd = tuple(sorted((e, s) for e, s in acc.items() if s))
            i = len(self.faces)
            self.faces.append(bd)
            self.face_keys.append(key)
            self._f[key] = i
            self._invalidate()
        return i

    def _invalidate(self):
        self._solver = None
        self._ids = None

    # lookup
    def vertex_index(self, key) -> Optional[int]:
        return self._v.get(key)

    def edge_index(self, key) -> Optional[int]:
        return self._e.get(key)

    def face_index(self, key) -> Optional[int]:
        return self._f.get(key)

    def has_face(self, key) -> bool:
        return key in self._f

    @property
    def counts(self):
        return (len(self.vertices), len(self.edges), len(self.faces))

    def chain_complex(self):
        return (len(self.vertices), [(t, h) for t, h, _ in self.edges],
                [list(bd) for bd in self.faces])

    # ids
    def vertex_id(self, i) -> str:
        return fmt_key(self.vertices[i])

    def edge_id(self, i) -> str:
        t, h, label = self.edges[i]
        return f"{self.vertex_id(t)}>{self.vertex_id(h)}:{label}"

    def face_id(self, i) -> str:
        return "F" + fmt_key(self.face_keys[i])

    def cell_id(self, dim, i) -> str:
        return (self.vertex_id, self.edge_id, self.face_id)[dim](i)

    def cell_index_by_id(self, dim, cid) -> int:
        if self._ids is None:
            self._ids = [
                {self.vertex_id(i): i for i in range(len(self.vertices))},
                {self.edge_id(i): i for i in range(len(self.edges))},
                {self.face_id(i): i for i in range(len(self.faces))},
            ]
        return self._ids[dim][cid]

    # chains
    def chain(self, dim, coeffs=None) -> "Chain":
        return Chain(self, dim, coeffs or {})

    def face_chain(self, i, coef=1) -> "Chain":
        return Chain(self, 2, {i: coef})

    def solver(self):
        if self._solver is None:
            self._solver = _Elimination(self)
        return self._solver

    def subcomplex(self, vertex_keys, name="") -> "Complex2":
        """Induced subcomplex on a set of vertex keys (faces kept when all
        their edges survive)."""
        keep = set(vertex_keys)
        out = Complex2(name or self.name)
        for k in self.vertices:
            if k in keep:
                out.add_vertex(k)
        emap = {}
        for i, (t, h, label) in enumerate(self.edges):
            tk, hk = self.vertices[t], self.vertices[h]
            if tk in keep and hk in keep:
                emap[i] = out.add_edge(tk, hk, label, key=self.edge_keys[i])
        for i, bd in enumerate(self.faces):
            if all(e in emap for e, _ in bd):
                out.add_face([(emap[e], s) for e, s in bd], self.face_keys[i])
        out.partial = self.partial
        return out

    def __repr__(self):
        v, e, f = self.counts
        return f"Complex2({self.name!r}, V={v}, E={e}, F={f})"


class Chain:
    """Sparse integer chain of a fixed dimension on a ``Complex2``."""
    __slots__ = ("complex", "dim", "coeffs")

    def __init__(self, complex: Complex2, dim: int, coeffs: dict):
        self.complex = complex
        self.dim = dim
        self.coeffs = {int(k): int(v) for k, v in coeffs.items() if v}

    @property
    def mass(self) -> int:
        return sum(abs(v) for v in self.coeffs.values())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _combine(self, other, sign):
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + sign * v
        return Chain(self.complex, self.dim, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Chain(self.complex, self.dim, {k: -v for k, v in self.coeffs.items()})

    def __mul__(self, k: int):
        return Chain(self.complex, self.dim, {i: k * v for i, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Chain) and self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, frozenset(self.coeffs.items())))

    def boundary(self) -> "Chain":
        return boundary(self)

    def to_json(self):
        cx = self.complex
        return {"dim": self.dim,
                "coeffs": {cx.cell_id(self.dim, i): v for i, v in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, complex: Complex2, data) -> "Chain":
        dim = int(data["dim"])
        return cls(complex, dim, {complex.cell_index_by_id(dim, k): v
                                  for k, v in data["coeffs"].items()})

    def __repr__(self):
        return f"Chain(dim={self.dim}, mass={self.mass}, support={len(self.coeffs)})"


def boundary(c: Chain) -> Chain:
    cx = c.complex
    out: Dict[int, int] = {}
    if c.dim == 2:
        for f, k in c.coeffs.items():
            for e, s in cx.faces[f]:
                out[e] = out.get(e, 0) + k * s
    elif c.dim == 1:
        for e, k in c.coeffs.items():
            t, h, _ = cx.edges[e]
            out[h] = out.get(h, 0) + k
            out[t] = out.get(t, 0) - k
    else:
        raise ValueError("boundary of a 0-chain")
    return Chain(cx, c.dim - 1, out)


class _Elimination:
    """Exact sparse Gaussian elimination of the face->edge boundary matrix,
    reusable for many right-hand sides."""

    def __init__(self, cx: Complex2):
        nE, nF = len(cx.edges), len(cx.faces)
        rows: List[Dict[int, Fraction]] = [dict() for _ in range(nE)]
        col_rows: Dict[int, set] = {}
        for f, bd in enumerate(cx.faces):
            for e, s in bd:
                rows[e][f] = Fraction(s)
                col_rows.setdefault(f, set()).add(e)
        is_pivot = [False] * nE
        pivots = []
        free = []
        ops = []
        for col in range(nF):
            cand = [r for r in col_rows.get(col, ()) if not is_pivot[r]]
            if not cand:
                free.append(col)
                continue
            r = min(cand, key=lambda q: (len(rows[q]), q))
            is_pivot[r] = True
            pivots.append((r, col))
            prow = rows[r]
            pv = prow[col]
            for q in sorted(cand):
                if q == r:
                    continue
                m = rows[q][col] / pv
                rq = rows[q]
                for c2, v in prow.items():
                    nv = rq.get(c2, 0) - m * v
                    if nv:
                        if c2 not in rq:
                            col_rows.setdefault(c2, set()).add(q)
                        rq[c2] = nv
                    else:
                        rq.pop(c2, None)
                        col_rows[c2].discard(q)
                ops.append((q, r, m))
        self.rows = rows
        self.pivots = pivots
        self.free = free
        self.ops = ops
        self.zero_rows = [r for r in range(nE) if not is_pivot[r]]
        self.nF = nF
        self._kernel = None

    def _back(self, b, free_values):
        x: Dict[int, Fraction] = dict(free_values)
        for r, col in reversed(self.pivots):
            acc = b[r]
            for c2, v in self.rows[r].items():
                if c2 != col:
                    xv = x.get(c2)
                    if xv:
                        acc -= v * xv
            if acc:
                x[col] = acc / self.rows[r][col]
        return {k: v for k, v in x.items() if v}

    def particular(self, rhs: Dict[int, int]):
        """A solution of d2 x = rhs with free variables zero, or None."""
        b = [Fraction(0)] * len(self.rows)
        for e, v in rhs.items():
            b[e] = Fraction(v)
        for q, r, m in self.ops:
            if b[r]:
                b[q] -= m * b[r]
        if any(b[q] for q in self.zero_rows):
            return None
        return self._back(b, {})

    def kernel(self):
        if self._kernel is None:
            zero = [Fraction(0)] * len(self.rows)
            self._kernel = [self._back(zero, {f: Fraction(1)}) for f in self.free]
        return self._kernel


@dataclass
class FillingResult:
    status: str
    chain: Optional[Chain] = None
    mass: Optional[int] = None
    lp_bound: Optional[Fraction] = None
    nodes: int = 0
    seconds: float = 0.0
    note: str = ""

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def to_json(self, timing=True, chain=False):
        out = {"status": self.status, "mass": self.mass,
               "lp_bound": None if self.lp_bound is None else str(self.lp_bound),
               "nodes": self.nodes, "note": self.note}
        if timing:
            out["seconds"] = round(self.seconds, 6)
        if chain and self.chain is not None:
            out["chain"] = self.chain.to_json()
        return out


def _as_cycle(cx, alpha) -> Chain:
    if isinstance(alpha, Chain):
        return alpha
    return Chain(cx, 1, alpha)


def fa_fill(cx: Complex2, alpha, node_budget: int = 20_000,
            max_lp_vars: int = 400) -> FillingResult:
    """Minimum-mass integral 2-chain with boundary ``alpha`` inside ``cx``.

    The filling space is ``particular + kernel``; only faces touched by the
    kernel enter the integer program, the rest are forced.  When the
    boundary map is injective on ``cx`` the filling is unique and no search
    is needed.
    """
    t0 = time.perf_counter()
    alpha = _as_cycle(cx, alpha)
    if alpha.dim != 1:
        raise ValueError("fa_fill expects a 1-chain")
    if not boundary(alpha).is_zero():
        raise ValueError("input chain is not a cycle")

    def done(status, coeffs=None, lp_bound=None, nodes=0, note=""):
        chain = None if coeffs is None else Chain(cx, 2, coeffs)
        if chain is not None and boundary(chain) != alpha:
            raise RuntimeError("filling does not bound the input cycle")
        return FillingResult(status, chain, None if chain is None else chain.mass,
                             lp_bound, nodes, time.perf_counter() - t0, note)

    if alpha.is_zero():
        return done(EXACT, {}, Fraction(0))
    sol = cx.solver()
    y = sol.particular(alpha.coeffs)
    if y is None:
        return done(INFEASIBLE, note="cycle does not bound in this complex")
    kernel = sol.kernel()
    relevant = sorted(set(sol.free) | {j for k in kernel for j in k})
    fixed = {j: v for j, v in y.items() if j not in set(relevant)}
    if any(v.denominator != 1 for v in fixed.values()):
        return done(INFEASIBLE, note="no integral filling in this complex")
    fixed = {j: int(v) for j, v in fixed.items()}
    base_mass = sum(abs(v) for v in fixed.values())
    if not relevant:
        return done(EXACT, fixed, Fraction(base_mass))
    if len(relevant) > max_lp_vars:
        if all(v.denominator == 1 for v in y.values()):
            coeffs = {j: int(v) for j, v in y.items()}
            return done(BUDGET, coeffs, None, 0, "integer program too large; unoptimised filling")
        return done(BUDGET, note="integer program too large")
    pos = {j: k for k, j in enumerate(relevant)}
    nvar = 2 * len(relevant)
    A_eq, b_eq = [], []
    free_set = set(sol.free)
    for j in relevant:
        if j in free_set:
            continue
        row = [Fraction(0)] * nvar
        row[2 * pos[j]] += 1
        row[2 * pos[j] + 1] -= 1
        for f, K in zip(sol.free, kernel):
            kv = K.get(j)
            if kv:
                row[2 * pos[f]] -= kv
                row[2 * pos[f] + 1] += kv
        A_eq.append(row)
        b_eq.append(y.get(j, Fraction(0)))
    incumbent = None
    if all(y.get(j, Fraction(0)).denominator == 1 for j in relevant):
        incumbent = []
        for j in relevant:
            v = int(y.get(j, 0))
            incumbent += [max(v, 0), max(-v, 0)]
    res = lp.intlinprog_exact([1] * nvar, A_eq=A_eq, b_eq=b_eq,
                              node_budget=node_budget, incumbent=incumbent)
    if res.status == lp.INFEASIBLE:
        return done(INFEASIBLE, nodes=res.nodes, note="no integral filling in this complex")
    coeffs = dict(fixed)
    if res.x is not None:
        for j in relevant:
            v = res.x[2 * pos[j]] - res.x[2 * pos[j] + 1]
            if v:
                coeffs[j] = v
    lower = None if res.lower_bound is None else res.lower_bound + base_mass
    if res.status == lp.BUDGET:
        if res.x is None:
            return done(BUDGET, None, lower, res.nodes, "node budget exhausted")
        return done(BUDGET, coeffs, lower, res.nodes, "node budget exhausted")
    return done(EXACT, coeffs, lower, res.nodes)


def fa_profile(cx: Complex2, cycles, **kw):
    """Per-length maximum of FA over the given cycles.

    Returns ``{"table": {length: max mass}, "results": [...]}``; the table
    is the running maximum, so it is nondecreasing in length.
    """
    results = []
    raw: Dict[int, int] = {}
    for c in cycles:
        c = _as_cycle(cx, c)
        r = fa_fill(cx, c, **kw)
        results.append((c.mass, r))
        if r.exact:
            raw[c.mass] = max(raw.get(c.mass, 0), r.mass)
    table = {}
    best = 0
    for length in sorted(raw):
        best = max(best, raw[length])
        table[length] = best
    return {"table": table, "results": results}

