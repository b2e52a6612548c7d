"""Minimal-area van Kampen diagrams by best-first search.

States are cyclic words (cyclically reduced, stored in their least
rotation); a move inserts a cyclic conjugate of a relator or its inverse
and reduces.  Only insertions that cancel against a neighbour are tried:
a minimal diagram always has a cell sharing an edge with its boundary, so
nothing is lost.  Areas are exact relative to the length budget on
intermediate words.
"""
from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..groups.oracles import BudgetExceeded
from ..groups.presentation import Presentation
from ..homology import Chain, Complex2
from ..words import Word, format_word, free_reduce, inverse

EXACT = "exact"
LOWER_BOUND = "lower-bound"
NO_FILLING = "no-filling"
UNKNOWN = "unknown"


def _cyc(w: Word) -> Tuple[Word, int]:
    """Cyclic reduction of a freely reduced word, with the number of
    letters trimmed from each end."""
    k = 0
    n = len(w)
    while n - 2 * k >= 2 and w[k][0] == w[n - 1 - k][0] and w[k][1] == -w[n - 1 - k][1]:
        k += 1
    return w[k:n - k], k


def _canon(w: Word) -> Tuple[Word, int]:
    """Least rotation and its offset."""
    if not w:
        return w, 0
    best, off = w, 0
    for k in range(1, len(w)):
        r = w[k:] + w[:k]
        if r < best:
            best, off = r, k
    return best, off


def canonical(w) -> Word:
    return _canon(_cyc(free_reduce(w))[0])[0]


@dataclass(frozen=True)
class Step:
    position: int
    relator: int
    sign: int
    rotation: int  # conjugator: the relator is read from this offset

    def piece(self, p: Presentation) -> Word:
        r = p.relators[self.relator]
        r = r if self.sign == 1 else inverse(r)
        return r[self.rotation:] + r[:self.rotation]

    def to_json(self):
        return {"position": self.position, "relator": self.relator, "sign": self.sign,
                "rotation": self.rotation}


@dataclass
class DiagramCertificate:
    word: Word
    steps: List[Step]

    @property
    def area(self) -> int:
        return len(self.steps)

    def to_json(self):
        return {"word": format_word(self.word), "area": self.area,
                "steps": [s.to_json() for s in self.steps]}


def apply_step(w: Word, step: Step, p: Presentation) -> Word:
    i = step.position
    return canonical(w[:i] + step.piece(p) + w[i:])


def replay(p: Presentation, cert: DiagramCertificate) -> bool:
    """True when applying the steps to the word empties it."""
    w = canonical(cert.word)
    for s in cert.steps:
        if not 0 <= s.position <= len(w):
            return False
        w = apply_step(w, s, p)
    return w == ()


def diagram_vertices(p: Presentation, cert: DiagramCertificate, oracle) -> set:
    """Group elements visited by the based loops of a replay (the vertex
    set of the van Kampen diagram mapped into the Cayley graph)."""
    seen = set()

    def visit(b, word):
        seen.add(b)
        for x in word:
            b = oracle.mul_letter(b, x)
            seen.add(b)

    def settle(b, raw):
        # cyclic reduction and rotation move the base point along the loop
        w2, k = _cyc(raw)
        b = oracle.mul(b, raw[:k])
        w3, off = _canon(w2)
        return oracle.mul(b, w2[:off]), w3

    base = oracle.identity
    w = free_reduce(cert.word)
    visit(base, w)
    base, w = settle(base, w)
    for s in cert.steps:
        ins = w[:s.position] + s.piece(p) + w[s.position:]
        visit(base, ins)
        base, w = settle(base, free_reduce(ins))
    return seen


@dataclass
class DeltaResult:
    status: str
    area: Optional[int]
    lower_bound: int
    certificate: Optional[DiagramCertificate]
    area_budget: int
    length_budget: int
    states: int = 0
    seconds: float = 0.0
    note: str = ""

    @property
    def exact(self) -> bool:
        return self.status == EXACT

    def to_json(self, timing=True, certificate=False):
        d = {"status": self.status, "area": self.area, "lower_bound": self.lower_bound,
             "area_budget": self.area_budget, "length_budget": self.length_budget,
             "states": self.states}
        if self.note:
            d["note"] = self.note
        if timing:
            d["seconds"] = round(self.seconds, 4)
        if certificate and self.certificate is not None:
            d["certificate"] = self.certificate.to_json()
        return d


def _pieces(p: Presentation):
    out = []
    seen = set()
    for idx, r in enumerate(p.relators):
        for sign in (1, -1):
            rr = r if sign == 1 else inverse(r)
            for k in range(len(rr)):
                piece = rr[k:] + rr[:k]
                if piece not in seen:
                    seen.add(piece)
                    out.append((piece, idx, sign, k))
    return out


def _heuristic(p: Presentation):
    """Admissible lower bound on the remaining area of a word.

    One relator application removes at most ``|r|`` letters, and at most
    ``m_g`` letters ``g^+-1`` where ``m_g`` is the largest number of them
    in one relator.  For generators that never share a relator the
    per-generator bounds add up.
    """
    maxrel = max(1, p.max_relator_length)
    gens = list(p.generators)
    m = {g: max((sum(1 for x in r if x[0] == g) for r in p.relators), default=0) for g in gens}
    gens = [g for g in gens if m[g]]
    clash = {g: set() for g in gens}
    for r in p.relators:
        used = {x[0] for x in r}
        for g in used:
            clash[g] |= used - {g}
    families = []

    def grow(fam, rest):
        if not rest:
            if not any(set(fam) < set(f) for f in families):
                families.append(tuple(fam))
            return
        g, rest = rest[0], rest[1:]
        if not (clash[g] & set(fam)):
            grow(fam + [g], rest)
        grow(fam, rest)

    if len(gens) <= 16:
        grow([], gens)
    else:
        families = [(g,) for g in gens]

    def h(x):
        cnt: Dict[str, int] = {}
        for g, _ in x:
            cnt[g] = cnt.get(g, 0) + 1
        best = math.ceil(len(x) / maxrel)
        for fam in families:
            best = max(best, sum(-(-cnt.get(g, 0) // m[g]) for g in fam))
        return best

    return h


def delta_fill(p: Presentation, w, area_budget: int = 30, length_budget: int = 30,
               oracle=None, max_states: int = 2_000_000) -> DeltaResult:
    """Least number of relator applications turning ``w`` into the empty
    word, searching only through words of length at most
    ``length_budget``."""
    t0 = time.perf_counter()
    w = free_reduce(w)
    if oracle is not None and not oracle.is_trivial(w):
        return DeltaResult(NO_FILLING, None, 0, None, area_budget, length_budget,
                           seconds=time.perf_counter() - t0, note="word is nontrivial")
    if not p.relators and w:
        return DeltaResult(NO_FILLING, None, 0, None, area_budget, length_budget,
                           seconds=time.perf_counter() - t0, note="free group")
    start = canonical(w)
    h = _heuristic(p)

    pieces = _pieces(p)
    by_last: Dict = {}
    by_first: Dict = {}
    for pc in pieces:
        by_last.setdefault(pc[0][-1], []).append(pc)
        by_first.setdefault(pc[0][0], []).append(pc)
    g = {start: 0}
    parent: Dict = {start: None}
    tie = itertools.count()
    heap = [(h(start), 0, next(tie), start)]
    closed = set()
    while heap:
        f, _, _, x = heapq.heappop(heap)
        if x in closed:
            continue
        if f > area_budget:
            return DeltaResult(LOWER_BOUND, None, f, None, area_budget, length_budget,
                               states=len(g), seconds=time.perf_counter() - t0,
                               note=f"area exceeds {area_budget} among fillings through words "
                                    f"of length <= {length_budget}")
        if not x:
            steps = []
            node = x
            while parent[node] is not None:
                prev, step = parent[node]
                steps.append(step)
                node = prev
            cert = DiagramCertificate(w, steps[::-1])
            assert replay(p, cert)
            return DeltaResult(EXACT, len(steps), len(steps), cert, area_budget, length_budget,
                               states=len(g), seconds=time.perf_counter() - t0)
        closed.add(x)
        gx = g[x]
        m = len(x)
        for i in range(m):
            cands = {}
            # piece ending with the inverse of x[i] or starting with the inverse of x[i-1]
            for pc in by_last.get((x[i][0], -x[i][1]), ()):
                cands[pc[0]] = pc
            for pc in by_first.get((x[i - 1][0], -x[i - 1][1]), ()):
                cands[pc[0]] = pc
            for piece, idx, sign, k in cands.values():
                y = canonical(x[:i] + piece + x[i:])
                if len(y) > length_budget:
                    continue
                if gx + 1 < g.get(y, math.inf):
                    g[y] = gx + 1
                    parent[y] = (x, Step(i, idx, sign, k))
                    # ties go to the deeper state
                    heapq.heappush(heap, (gx + 1 + h(y), -(gx + 1), next(tie), y))
        if len(g) > max_states:
            lb = min((e[0] for e in heap), default=h(start))
            return DeltaResult(UNKNOWN, None, lb, None, area_budget, length_budget,
                               states=len(g), seconds=time.perf_counter() - t0,
                               note="state budget exhausted")
    return DeltaResult(LOWER_BOUND, None, area_budget + 1, None, area_budget, length_budget,
                       states=len(g), seconds=time.perf_counter() - t0,
                       note=f"no filling through words of length <= {length_budget}")


# ------------------------------------------------------------ Cayley balls

def cayley_ball(p: Presentation, oracle, radius: int) -> Complex2:
    """The ball of the Cayley 2-complex: one edge ``g -> g x`` per
    generator, one face per (vertex, relator) whose boundary path stays in
    the ball."""
    cx = _cayley_on(p, oracle, oracle.ball(radius), f"cayley-{p.name}-r{radius}")
    cx.meta["radius"] = radius
    return cx


def cayley_region(p: Presentation, oracle, seeds, radius: int, max_size: int = 500_000) -> Complex2:
    """The part of the Cayley 2-complex within ``radius`` of ``seeds``."""
    seen = set(seeds)
    frontier = list(seen)
    letters = oracle.letters()
    for _ in range(radius):
        nxt = []
        for k in frontier:
            for x in letters:
                k2 = oracle.mul_letter(k, x)
                if k2 not in seen:
                    seen.add(k2)
                    nxt.append(k2)
        if len(seen) > max_size:
            raise BudgetExceeded(f"region exceeds {max_size} vertices")
        frontier = nxt
    cx = _cayley_on(p, oracle, seen, f"cayley-{p.name}-tube{radius}")
    cx.meta["radius"] = radius
    return cx


def loop_vertices(oracle, w, start=None) -> list:
    cur = oracle.identity if start is None else start
    out = [cur]
    for x in w:
        cur = oracle.mul_letter(cur, x)
        out.append(cur)
    return out


def _cayley_on(p: Presentation, oracle, verts, name) -> Complex2:
    cx = Complex2(name)
    for k in sorted(verts, key=repr):
        cx.add_vertex(k)
    for k in list(cx.vertices):
        for gname in p.generators:
            k2 = oracle.mul_letter(k, (gname, 1))
            if k2 in verts:
                cx.add_edge(k, k2, gname, key=(k, gname))
    for k in list(cx.vertices):
        for idx, r in enumerate(p.relators):
            bd = _path_edges(cx, oracle, k, r)
            if bd is not None:
                cx.add_face(bd, key=(k, idx))
    return cx


def _path_edges(cx: Complex2, oracle, start, w) -> Optional[list]:
    out = []
    cur = start
    for gname, e in w:
        if e == 1:
            nxt = oracle.mul_letter(cur, (gname, 1))
            idx = cx.edge_index((cur, gname))
        else:
            nxt = oracle.mul_letter(cur, (gname, -1))
            idx = cx.edge_index((nxt, gname))
        if idx is None:
            return None
        out.append((idx, e))
        cur = nxt
    return out


def word_cycle(cx: Complex2, oracle, w, start=None) -> Chain:
    """The 1-chain of the loop reading ``w`` from ``start``."""
    start = oracle.identity if start is None else start
    bd = _path_edges(cx, oracle, start, free_reduce(w))
    if bd is None:
        raise KeyError("loop leaves the ball")
    coeffs: Dict[int, int] = {}
    for e, s in bd:
        coeffs[e] = coeffs.get(e, 0) + s
    return Chain(cx, 1, {e: c for e, c in coeffs.items() if c})


def compatible_radius(p: Presentation, cert: DiagramCertificate, oracle) -> int:
    """Smallest ball radius (about the identity) containing the diagram
    found by ``delta_fill``."""
    verts = diagram_vertices(p, cert, oracle)
    r = 0
    while True:
        ball = oracle.ball(r)
        if all(v in ball for v in verts):
            return r
        r += 1
