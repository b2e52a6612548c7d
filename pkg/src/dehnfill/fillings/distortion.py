"""Distortion of the fibre ``F_n`` in ``F_n x|_phi Z``.

``dist(l)`` is the largest free length of a fibre element of ambient length
at most ``l``.  Rows up to the radius that an exact ball search can reach
are exact; beyond it the table holds lower bounds realized by explicit
witness words: conjugates ``t^k u t^-k``, products of two of them, and
concatenations of shorter witnesses.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional

from ..groups.oracles import BudgetExceeded, FbcOracle, FreeByCyclic
from ..words import Word, format_word, free_reduce, gen_word, inverse


@dataclass
class DistortionRow:
    length: int
    value: int
    witness: Word
    exact: bool

    def to_json(self):
        return {"l": self.length, "dist": self.value, "witness": format_word(self.witness),
                "exact": self.exact}


@dataclass
class DistortionTable:
    rows: List[DistortionRow] = field(default_factory=list)
    exact_radius: int = 0

    def as_dict(self):
        return {r.length: r.value for r in self.rows}

    def to_json(self):
        return {"exact_radius": self.exact_radius, "rows": [r.to_json() for r in self.rows]}

    def verify(self, fbc: FreeByCyclic) -> bool:
        """Monotone, and every witness has ambient length <= l and free
        length equal to the tabulated value."""
        orc = FbcOracle(fbc)
        prev = -1
        for r in self.rows:
            if r.value < prev or len(r.witness) > r.length:
                return False
            f = orc.free_part(r.witness)
            if f is None or len(f) != r.value:
                return False
            prev = r.value
        return True


def _exact_levels(orc: FbcOracle, l_max: int, budget: int):
    """Per radius: best fibre element (free length, geodesic word)."""
    letters = orc.letters()
    seen = {orc.identity: ()}
    frontier = [orc.identity]
    best = [(0, ())]
    r = 0
    while r < l_max:
        nxt = []
        for key in frontier:
            w = seen[key]
            for x in letters:
                k2 = orc.mul_letter(key, x)
                if k2 not in seen:
                    seen[k2] = w + (x,)
                    nxt.append(k2)
        if len(seen) > budget:
            break
        r += 1
        cand = max(((len(k[0]), seen[k]) for k in nxt if k[1] == 0), default=(0, ()))
        best.append(max(best[-1], cand, key=lambda p: p[0]))
        frontier = nxt
    return best, r


def _free_words(basis, m):
    out = [()]
    frontier = [()]
    for _ in range(m):
        nxt = []
        for w in frontier:
            for g in basis:
                for e in (1, -1):
                    if w and w[-1] == (g, -e):
                        continue
                    nxt.append(w + ((g, e),))
        out += nxt
        frontier = nxt
    return out


def distortion(fbc: FreeByCyclic, l_max: int, ball_budget: int = 400_000,
               max_core: int = 3) -> DistortionTable:
    orc = FbcOracle(fbc)
    exact, radius = _exact_levels(orc, l_max, ball_budget)
    t = fbc.t
    cands = {}  # l -> (free length, witness)

    def offer(word):
        f = orc.free_part(word)
        if f is None:
            return
        l = len(free_reduce(word))
        if l <= l_max and (l not in cands or len(f) > cands[l][0]):
            cands[l] = (len(f), free_reduce(word))

    conj = []
    for u in _free_words(fbc.basis, max_core)[1:]:
        for k in range(0, (l_max - len(u)) // 2 + 1):
            for s in (1, -1):
                word = gen_word(t, s * k) + u + gen_word(t, -s * k)
                offer(word)
                conj.append(word)
    # products of two conjugates; keep the strongest per length
    best_by_len = {}
    for w in conj:
        f = len(orc.free_part(w))
        if len(w) not in best_by_len or f > best_by_len[len(w)][0]:
            best_by_len[len(w)] = (f, w)
    tops = [w for _, w in best_by_len.values()]
    for a, b in itertools.product(tops, repeat=2):
        if len(a) + len(b) <= l_max:
            offer(a + b)
    table = DistortionTable(exact_radius=radius)
    cur = (0, ())
    best = {}
    for l in range(1, l_max + 1):
        if l <= radius:
            cur = max(cur, exact[l], key=lambda p: p[0])
        else:
            opts = [cands[l]] if l in cands else []
            # glue the best witnesses of two shorter lengths
            for a in range(1, l // 2 + 1):
                word = free_reduce(best[a][1] + best[l - a][1])
                f = orc.free_part(word)
                if f is not None:
                    opts.append((len(f), word))
            for o in opts:
                cur = max(cur, o, key=lambda p: p[0])
        best[l] = cur
        table.rows.append(DistortionRow(l, cur[0], cur[1], l <= radius))
    return table
