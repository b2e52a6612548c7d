"""Word-problem oracles.

Every oracle works on hashable element keys: ``element(word)`` builds one,
``mul_letter`` extends it by a single letter, and ``to_word`` spells the
normal form.  Balls and word lengths come from a shared, budgeted BFS.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..graphs import InputError, SimpleGraph
from ..words import Word, free_reduce, gen_word, inverse, substitute
from .folding import generates_free_group


class BudgetExceeded(RuntimeError):
    """A configured desk-scale budget was hit; the answer is undecided."""


class GroupOracle:
    name = "group"
    generators: Tuple[str, ...] = ()

    @property
    def identity(self):
        raise NotImplementedError

    def mul_letter(self, key, x):
        raise NotImplementedError

    def to_word(self, key) -> Word:
        raise NotImplementedError

    # derived operations
    def letters(self) -> List[Tuple[str, int]]:
        return [(g, e) for g in self.generators for e in (1, -1)]

    def element(self, w: Sequence):
        key = self.identity
        for x in w:
            key = self.mul_letter(key, x)
        return key

    def mul(self, key, w: Sequence):
        for x in w:
            key = self.mul_letter(key, x)
        return key

    def normal_form(self, w: Sequence) -> Word:
        return self.to_word(self.element(w))

    def is_trivial(self, w: Sequence) -> bool:
        return self.element(w) == self.identity

    def equal(self, w1, w2) -> bool:
        return self.element(w1) == self.element(w2)

    def _bfs_state(self):
        st = getattr(self, "_bfs", None)
        if st is None:
            st = {"dist": {self.identity: 0}, "frontier": [self.identity], "radius": 0}
            self._bfs = st
        return st

    def ball(self, radius: int, max_size: int = 500_000) -> Dict:
        """Element keys within ``radius`` of the identity, mapped to their
        word length."""
        st = self._bfs_state()
        letters = self.letters()
        while st["radius"] < radius:
            nxt = []
            d = st["radius"] + 1
            dist = st["dist"]
            for key in st["frontier"]:
                for x in letters:
                    k2 = self.mul_letter(key, x)
                    if k2 not in dist:
                        dist[k2] = d
                        nxt.append(k2)
                        if len(dist) > max_size:
                            self._bfs = None
                            raise BudgetExceeded(f"ball budget exceeded at radius {d}")
            st["frontier"] = nxt
            st["radius"] = d
        return {k: v for k, v in st["dist"].items() if v <= radius}

    def ball_words(self, radius: int, max_size: int = 500_000):
        return {self.to_word(k) for k in self.ball(radius, max_size)}

    def length(self, w: Sequence, max_radius: int = 14, max_size: int = 500_000) -> int:
        """Word length with respect to ``generators``."""
        key = self.element(w)
        st = self._bfs_state()
        if key in st["dist"]:
            return st["dist"][key]
        for r in range(st["radius"] + 1, max_radius + 1):
            self.ball(r, max_size)
            if key in self._bfs["dist"]:
                return r
        raise BudgetExceeded(f"ball budget exceeded: length above {max_radius}")

    def height(self, w: Sequence) -> int:
        return sum(e for _, e in w)


class FreeOracle(GroupOracle):
    name = "free"

    def __init__(self, gens: Iterable[str]):
        self.generators = tuple(gens)

    @property
    def identity(self):
        return ()

    def mul_letter(self, key, x):
        if key and key[-1][0] == x[0] and key[-1][1] == -x[1]:
            return key[:-1]
        return key + (tuple(x),)

    def element(self, w):
        return free_reduce(w)

    def to_word(self, key):
        return key

    def length(self, w, max_radius=None, max_size=None) -> int:
        return len(free_reduce(w))


def free_oracle(gens) -> FreeOracle:
    return FreeOracle(gens)


class RaagOracle(GroupOracle):
    """Right-angled Artin group; normal form = lexicographically least
    reduced word among those related by commuting adjacent letters."""
    name = "raag"

    def __init__(self, g: SimpleGraph):
        self.graph = g
        self.generators = tuple(g.vertices)
        self._comm = {frozenset(e) for e in g.edges}

    def commute(self, a: str, b: str) -> bool:
        return a == b or frozenset((a, b)) in self._comm

    @property
    def identity(self):
        return ()

    def _append(self, w: list, x):
        g, e = x
        for k in range(len(w) - 1, -1, -1):
            h, f = w[k]
            if h == g:
                if f == -e:
                    del w[k]
                    return
                break
            if not self.commute(h, g):
                break
        w.append((g, e))

    def reduce(self, w) -> list:
        out: list = []
        for x in w:
            self._append(out, tuple(x))
        return out

    def canonical(self, w) -> Word:
        """Lexicographically least shuffle of a reduced word."""
        rest = list(w)
        out = []
        while rest:
            best = None
            for k, (g, e) in enumerate(rest):
                if all(self.commute(h, g) and h != g for h, _ in rest[:k]):
                    if best is None or (g, e) < rest[best]:
                        best = k
            out.append(rest.pop(best))
        return tuple(out)

    def element(self, w):
        return self.canonical(self.reduce(w))

    def mul_letter(self, key, x):
        w = list(key)
        self._append(w, tuple(x))
        return self.canonical(w)

    def to_word(self, key):
        return key

    def length(self, w, max_radius=None, max_size=None) -> int:
        return len(self.element(w))


def raag_oracle(g: SimpleGraph) -> RaagOracle:
    return RaagOracle(g)


class FreeByCyclic:
    """``F_n x|_phi Z`` with the convention ``t^-1 x t = phi(x)``."""

    def __init__(self, basis: Sequence[str], phi: Dict[str, Word], phi_inv=None, t: str = "t",
                 check: bool = True):
        self.basis = tuple(basis)
        self.t = t
        if set(phi) != set(self.basis):
            raise InputError("phi must give an image for every basis letter")
        self.phi = {x: free_reduce(phi[x]) for x in self.basis}
        for img in self.phi.values():
            for g, _ in img:
                if g not in self.basis:
                    raise InputError(f"phi image uses unknown letter {g}")
        if check and not generates_free_group(self.phi.values(), self.basis):
            raise InputError("phi is not onto: its images do not generate the free group")
        if phi_inv is None:
            phi_inv = nielsen_inverse(self.basis, self.phi)
        self.phi_inv = {x: free_reduce(phi_inv[x]) for x in self.basis}
        if check:
            for x in self.basis:
                if substitute(self.phi_inv[x], self.phi) != ((x, 1),) or \
                        substitute(self.phi[x], self.phi_inv) != ((x, 1),):
                    raise InputError("the supplied inverse does not invert phi")
        self._pow: Dict[int, Dict[str, Word]] = {0: {x: ((x, 1),) for x in self.basis},
                                                1: self.phi, -1: self.phi_inv}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def power_images(self, k: int) -> Dict[str, Word]:
        if k not in self._pow:
            step = self.phi if k > 0 else self.phi_inv
            prev = self.power_images(k - 1 if k > 0 else k + 1)
            self._pow[k] = {x: substitute(step[x], prev) for x in self.basis}
        return self._pow[k]

    def apply(self, w: Sequence, k: int = 1) -> Word:
        """``phi^k(w)``."""
        return substitute(w, self.power_images(k))

    def to_json(self):
        from ..words import format_word
        return {"basis": list(self.basis), "t": self.t,
                "phi": {x: format_word(self.phi[x]) for x in self.basis},
                "phi_inv": {x: format_word(self.phi_inv[x]) for x in self.basis}}

    @classmethod
    def from_json(cls, d):
        from ..words import as_word
        basis = d.get("basis") or sorted(d["phi"])
        inv = d.get("phi_inv")
        return cls(basis, {x: as_word(v) for x, v in d["phi"].items()},
                   None if inv is None else {x: as_word(v) for x, v in inv.items()},
                   d.get("t", "t"))

    def __repr__(self):
        return f"FreeByCyclic(rank={self.rank})"


def nielsen_inverse(basis, phi) -> Dict[str, Word]:
    """Invert an automorphism by Nielsen reduction of the image tuple.

    Only length-reducing elementary moves are used; if the images are not
    brought down to single letters the inverse must be supplied explicitly.
    """
    vs = [free_reduce(phi[x]) for x in basis]
    es = [((f"@{x}", 1),) for x in basis]  # expressions over placeholder letters
    changed = True
    while changed:
        changed = False
        for j in range(len(vs)):
            for k in range(len(vs)):
                if j == k:
                    continue
                for ek in (1, -1):
                    vk = vs[k] if ek == 1 else inverse(vs[k])
                    xk = es[k] if ek == 1 else inverse(es[k])
                    for right in (True, False):
                        cand = free_reduce(vs[j] + vk) if right else free_reduce(vk + vs[j])
                        if len(cand) < len(vs[j]):
                            vs[j] = cand
                            es[j] = free_reduce(es[j] + xk) if right else free_reduce(xk + es[j])
                            changed = True
    if any(len(v) != 1 for v in vs) or len({v[0][0] for v in vs}) != len(vs):
        raise InputError("could not invert phi by Nielsen reduction; supply phi_inv")
    back = {f"@{x}": ((x, 1),) for x in basis}
    inv = {}
    for v, e in zip(vs, es):
        g, sgn = v[0]
        expr = substitute(e, back)
        inv[g] = expr if sgn == 1 else inverse(expr)
    return inv


class FbcOracle(GroupOracle):
    """Elements ``w t^k`` stored as ``(w, k)``."""
    name = "free-by-cyclic"

    def __init__(self, fbc: FreeByCyclic):
        self.fbc = fbc
        self.generators = fbc.basis + (fbc.t,)

    @property
    def identity(self):
        return ((), 0)

    def mul_letter(self, key, x):
        w, k = key
        g, e = x
        if g == self.fbc.t:
            return (w, k + e)
        img = self.fbc.power_images(-k)[g]
        if e == -1:
            img = inverse(img)
        return (free_reduce(w + img), k)

    def to_word(self, key):
        w, k = key
        return tuple(w) + gen_word(self.fbc.t, k)

    def free_part(self, w) -> Optional[Word]:
        """The free-group element if ``w`` has t-exponent zero, else None."""
        f, k = self.element(w)
        return f if k == 0 else None


def fbc_oracle(fbc: FreeByCyclic) -> FbcOracle:
    return FbcOracle(fbc)


class DoubleOracle(GroupOracle):
    """``F_n x| F(t_1, t_2)`` where each ``t_r`` acts as ``t``.

    Elements ``w f`` are stored as ``(w, f)``; conjugation by ``f`` acts on
    the free factor as ``phi^(-h(f))`` with ``h`` the exponent sum.
    """
    name = "double"

    def __init__(self, fbc: FreeByCyclic, t_names=("t1", "t2")):
        self.fbc = fbc
        self.t_names = tuple(t_names)
        self.generators = fbc.basis + self.t_names

    @property
    def identity(self):
        return ((), ())

    def mul_letter(self, key, x):
        w, f = key
        g, e = x
        if g in self.t_names:
            if f and f[-1][0] == g and f[-1][1] == -e:
                return (w, f[:-1])
            return (w, f + ((g, e),))
        k = sum(s for _, s in f)
        img = self.fbc.power_images(-k)[g]
        if e == -1:
            img = inverse(img)
        return (free_reduce(w + img), f)

    def to_word(self, key):
        w, f = key
        return tuple(w) + tuple(f)


class ProductOracle(GroupOracle):
    name = "product"

    def __init__(self, o1: GroupOracle, o2: GroupOracle):
        if set(o1.generators) & set(o2.generators):
            raise InputError("product factors must have disjoint generators")
        self.o1, self.o2 = o1, o2
        self.generators = tuple(o1.generators) + tuple(o2.generators)
        self._first = set(o1.generators)

    @property
    def identity(self):
        return (self.o1.identity, self.o2.identity)

    def mul_letter(self, key, x):
        a, b = key
        if x[0] in self._first:
            return (self.o1.mul_letter(a, x), b)
        return (a, self.o2.mul_letter(b, x))

    def to_word(self, key):
        return tuple(self.o1.to_word(key[0])) + tuple(self.o2.to_word(key[1]))

    def split(self, w):
        return (tuple(x for x in w if x[0] in self._first),
                tuple(x for x in w if x[0] not in self._first))


def product_oracle(o1, o2) -> ProductOracle:
    return ProductOracle(o1, o2)
