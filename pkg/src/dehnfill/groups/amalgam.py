"""Word problem in the star-shaped graph of groups ``G``.

The centre vertex group is ``Q = B x F(u, v)``; leaf ``i`` is the RAAG
``A_i`` on the marked flag complex with ``a -> a_i``; the edge group is
``E_i = F(a_i, s) x F(u, v)``, identified letter by letter.

Words are cut into syllables (``y`` letters of leaf ``i`` belong to ``A_i``,
every other letter to ``Q``) and reduced Britton-style: a leaf syllable that
lies in its edge group moves to the centre, and a centre syllable wedged
between two syllables of the same leaf that lies in that edge group moves
into the leaf.  The word is trivial iff what remains is one trivial centre
syllable.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from ..complexes import Amalgam
from ..words import Word, free_reduce, inverse
from .oracles import BudgetExceeded, GroupOracle, ProductOracle, RaagOracle
from .slog import Slog, slog_to_free_by_cyclic

TRIVIAL = "trivial"
NONTRIVIAL = "nontrivial"
UNDECIDED = "undecided"

Q = "Q"


class AmalgamOracle(GroupOracle):
    name = "amalgam"

    def __init__(self, am: Amalgam, slog: Optional[Slog] = None, e_budget: int = 14):
        self.am = am
        self.slog = slog or slog_to_free_by_cyclic(am.gamma, am.s, am.t)
        self.q: ProductOracle = self.slog.q_oracle(am.u, am.v)
        self.b = self.q.o1
        self.generators = am.complex.generators
        self.e_budget = e_budget
        self.a_oracles = {i: RaagOracle(am.A_graph(i)) for i in range(1, am.n)}
        self.piece_of: Dict[str, object] = {g: Q for g in self.generators}
        for g, _ in am.y_names:
            self.piece_of[g] = am.piece_of_y_letter(g)
        self._half: Dict[Tuple[int, int], Dict] = {}
        self._registry: Dict = {}
        self._keys: Dict = {}
        self._mul: Dict = {}
        self._registry[self.invariant(())] = [()]
        self._keys[()] = ()

    # -------------------------------------------------------- membership
    def e_letters(self, i: int):
        return {self.am.a[i - 1], self.am.s, self.am.u, self.am.v}

    def membership_E_in_A(self, i: int, w) -> bool:
        """Is the A_i element ``w`` in E_i?  Special subgroups of RAAGs are
        convex, so this reads off the normal form."""
        nf = self.a_oracles[i].element(w)
        return all(g in self.e_letters(i) for g, _ in nf)

    def _half_ball(self, i: int, r: int) -> Dict:
        """``{B-key: word}`` for reduced words of length <= r in a_i, s."""
        key = (i, r)
        if key not in self._half:
            gens = (self.am.a[i - 1], self.am.s)
            if r == 0:
                self._half[key] = {self.b.identity: ()}
            else:
                prev = self._half_ball(i, r - 1)
                out = dict(prev)
                for k, w in prev.items():
                    if len(w) != r - 1:
                        continue
                    for g in gens:
                        for e in (1, -1):
                            if w and w[-1] == (g, -e):
                                continue
                            k2 = self.b.mul_letter(k, (g, e))
                            if k2 not in out:
                                out[k2] = w + ((g, e),)
                self._half[key] = out
        return self._half[key]

    def e_witness_in_B(self, i: int, b) -> Optional[Word]:
        """A word in ``a_i, s`` equal to the B-element ``b``, or None.

        If ``b`` lies in ``<a_i, s>`` its length there equals its B-length
        (convexity), which is at most the length of any spelling of ``b``; a
        meet-in-the-middle search over that radius is therefore exhaustive.
        """
        b = free_reduce(b)
        a_i, s = self.am.a[i - 1], self.am.s
        if all(g in (a_i, s) for g, _ in b):
            return b
        key = self.b.element(b)
        r = min(len(b), len(self.b.to_word(key)))
        if r > self.e_budget:
            raise BudgetExceeded(f"ball budget exceeded: B-length bound {r} > {self.e_budget}")
        lo, hi = r // 2, r - r // 2
        small, big = self._half_ball(i, lo), self._half_ball(i, hi)
        for k1, w1 in sorted(big.items(), key=lambda kv: (len(kv[1]), kv[1])):
            k = self.b.mul(self.b.element(inverse(w1)), self.b.to_word(key))
            w2 = small.get(k)
            if w2 is not None:
                return free_reduce(w1 + w2)
        return None

    def membership_E_in_Q(self, i: int, q) -> bool:
        return self.e_witness_in_Q(i, q) is not None

    def e_witness_in_Q(self, i: int, q) -> Optional[Word]:
        bpart, fpart = self.q.split(free_reduce(q))
        wb = self.e_witness_in_B(i, bpart)
        if wb is None:
            return None
        return tuple(wb) + tuple(self.q.o2.element(fpart))

    # ---------------------------------------------------------- syllables
    def _nf(self, piece, w) -> Word:
        # centre syllables keep their (short) spelling: normal forms in B
        # can be far longer, which would blow up the membership search
        if piece == Q:
            return () if self.q.is_trivial(w) else free_reduce(w)
        return self.a_oracles[piece].normal_form(w)

    def syllables(self, w) -> List[list]:
        out: List[list] = []
        for x in w:
            p = self.piece_of[x[0]]
            if out and out[-1][0] == p:
                out[-1][1].append(tuple(x))
            else:
                out.append([p, [tuple(x)]])
        return [[p, self._nf(p, wd)] for p, wd in out]

    @staticmethod
    def _merge(syls):
        out = []
        for p, wd in syls:
            if not wd:
                continue
            if out and out[-1][0] == p:
                out[-1][1] = tuple(out[-1][1]) + tuple(wd)
            else:
                out.append([p, tuple(wd)])
        return out

    def reduce(self, w, normalize: bool = False) -> List[list]:
        """Britton-reduced syllable list ``[[piece, word], ...]``; with
        ``normalize`` the centre syllables are put in normal form."""
        syls = self.syllables(w)
        while True:
            # a syllable can normalize to nothing, making its neighbours adjacent
            while True:
                nxt = [[p, self._nf(p, wd)] for p, wd in self._merge(syls)]
                if len(self._merge(nxt)) == len(nxt):
                    syls = nxt
                    break
                syls = nxt
            changed = False
            for k, (p, wd) in enumerate(syls):
                if p != Q:
                    if self.membership_E_in_A(p, wd):
                        syls[k] = [Q, self.a_oracles[p].normal_form(wd)]
                        changed = True
                        break
                elif 0 < k < len(syls) - 1 and syls[k - 1][0] == syls[k + 1][0] != Q:
                    i = syls[k - 1][0]
                    wit = self.e_witness_in_Q(i, wd)
                    if wit is not None:
                        syls[k] = [i, wit]
                        changed = True
                        break
            if not changed:
                if normalize:
                    syls = [[p, self.q.normal_form(wd) if p == Q else wd] for p, wd in syls]
                return syls

    def triviality(self, w) -> str:
        try:
            syls = self.reduce(w)
        except BudgetExceeded:
            return UNDECIDED
        if not syls:
            return TRIVIAL
        if len(syls) == 1 and syls[0][0] == Q and self.q.is_trivial(syls[0][1]):
            return TRIVIAL
        return NONTRIVIAL

    def is_trivial(self, w) -> bool:
        v = self.triviality(w)
        if v == UNDECIDED:
            raise BudgetExceeded("undecided at desk scale")
        return v == TRIVIAL

    def reduced_word(self, w) -> Word:
        """Reduced spelling with edge-group prefixes of leaf syllables pushed
        into the centre syllable on their left."""
        syls = [list(s) for s in self.reduce(w, normalize=True)]
        for k in range(len(syls) - 1, 0, -1):
            p, wd = syls[k]
            if p == Q or syls[k - 1][0] != Q:
                continue
            pre, rest = self.e_prefix(p, wd)
            if pre:
                syls[k][1] = rest
                syls[k - 1][1] = self.q.normal_form(tuple(syls[k - 1][1]) + pre)
        out: list = []
        for _, wd in syls:
            out.extend(wd)
        return tuple(out)

    def e_prefix(self, i: int, w) -> Tuple[Word, Word]:
        """Split an A_i normal form as ``prefix * rest`` with ``prefix`` in
        E_i and ``rest`` the shortest element of its coset ``E_i rest``."""
        orc = self.a_oracles[i]
        rest = list(orc.element(w))
        el = self.e_letters(i)
        pre = []
        moved = True
        while moved:
            moved = False
            for k, (g, e) in enumerate(rest):
                if g in el and all(orc.commute(h, g) and h != g for h, _ in rest[:k]):
                    pre.append(rest.pop(k))
                    moved = True
                    break
        return orc.element(pre), tuple(rest)

    # -------------------------------------------------------- element keys
    def retract(self, w) -> Word:
        """Image under G -> Q killing every y letter."""
        return tuple(x for x in w if self.piece_of[x[0]] == Q)

    def invariant(self, w):
        ysum: Dict[str, int] = {}
        for g, e in w:
            if self.piece_of[g] != Q:
                ysum[g] = ysum.get(g, 0) + e
        return (self.q.element(self.retract(w)),
                tuple(sorted((g, k) for g, k in ysum.items() if k)))

    @property
    def identity(self):
        return ()

    def element(self, w):
        """Canonical key: the first registered spelling of the element.

        Elements are bucketed by a homomorphic invariant and compared within
        a bucket by the Britton reduction, so keys depend on query order but
        equality is exact.
        """
        w = free_reduce(w)
        if w in self._keys:
            return self._keys[w]
        inv = self.invariant(w)
        bucket = self._registry.setdefault(inv, [])
        for rep in bucket:
            if self.is_trivial(tuple(rep) + inverse(w)):
                self._keys[w] = rep
                return rep
        bucket.append(w)
        self._keys[w] = w
        return w

    def mul_letter(self, key, x):
        x = tuple(x)
        out = self._mul.get((key, x))
        if out is None:
            out = self.element(tuple(key) + (x,))
            self._mul[(key, x)] = out
            self._mul[(out, (x[0], -x[1]))] = key
        return out

    def to_word(self, key):
        return tuple(key)

    def normal_form(self, w) -> Word:
        return self.element(w)


def amalgam_oracle(am: Amalgam, **kw) -> AmalgamOracle:
    return AmalgamOracle(am, **kw)
