"""Stallings folding of finitely generated subgroups of a free group."""
from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

from ..words import Word, free_reduce

Letter = Tuple[str, int]


class FoldedGraph:
    """Folded labelled graph of the subgroup generated by ``words``.

    ``out[v][(g, e)]`` is the target of the edge leaving ``v`` read as the
    letter ``(g, e)``; both orientations are stored.  The base vertex is
    ``self.base``.
    """

    def __init__(self, words: Iterable[Sequence[Letter]]):
        self.out: Dict[int, Dict[Letter, int]] = {0: {}}
        self._parent: Dict[int, int] = {0: 0}
        self._n = 1
        self.base = 0
        for w in words:
            w = free_reduce(w)
            cur = self.base
            for k, x in enumerate(w):
                nxt = self.base if k == len(w) - 1 else self._new()
                self._join(cur, x, nxt)
                cur = self._find(nxt)
        self.base = self._find(self.base)

    def _new(self) -> int:
        v = self._n
        self._n += 1
        self.out[v] = {}
        self._parent[v] = v
        return v

    def _find(self, v: int) -> int:
        while self._parent[v] != v:
            self._parent[v] = self._parent[self._parent[v]]
            v = self._parent[v]
        return v

    def _join(self, a: int, x: Letter, b: int) -> None:
        stack = [(a, x, b)]
        while stack:
            a, (g, e), b = stack.pop()
            a, b = self._find(a), self._find(b)
            for src, lt, dst in ((a, (g, e), b), (b, (g, -e), a)):
                old = self.out[src].get(lt)
                if old is None:
                    self.out[src][lt] = dst
                    continue
                old = self._find(old)
                if old == dst:
                    continue
                # identify dst with old, then replay dst's edges from the survivor
                keep, gone = min(old, dst), max(old, dst)
                self._parent[gone] = keep
                moved = self.out.pop(gone)
                for y, z in moved.items():
                    stack.append((keep, y, z))
                for v in self.out:
                    for y, z in list(self.out[v].items()):
                        if z == gone:
                            self.out[v][y] = keep
                stack.append((src, lt, keep))
                break

    @property
    def vertices(self):
        return set(self.out)

    def accepts(self, w: Word) -> bool:
        """Does ``w`` lie in the subgroup?"""
        cur = self.base
        for x in free_reduce(w):
            nxt = self.out[cur].get(x)
            if nxt is None:
                return False
            cur = self._find(nxt)
        return cur == self.base

    def is_rose_on(self, gens: Iterable[str]) -> bool:
        """True iff the graph is one vertex carrying one loop per generator,
        i.e. the subgroup is the whole free group on ``gens``."""
        gens = set(gens)
        if len(self.out) != 1:
            return False
        loops = self.out[self.base]
        return set(loops) == {(g, e) for g in gens for e in (1, -1)}


def generates_free_group(words, gens) -> bool:
    return FoldedGraph(words).is_rose_on(gens)


def in_subgroup(w: Word, generators) -> bool:
    return FoldedGraph(generators).accepts(w)
