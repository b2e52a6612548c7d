"""Constructive fillings of loops in the level set of ``Q`` inside ``L_G``.

A trivial word ``w`` over ``x_1..x_n, t1, t2`` is cut into conjugates
``g x^e g^-1`` with ``g`` in ``F(t1, t2)``.  Each conjugate is rewritten
to ``theta(g) x^e theta(g)^-1`` (``theta`` sends ``t2`` to ``t1``) one
syllable of ``g`` at a time, from the inside out.  Switching the innermost
syllable ``t2^d`` to ``t1^d`` costs one loop, split into

* two grid disks in ``<t> x <s> x F(u, v)`` (scaled copies of the two
  triangles ``{t,s,u}``, ``{t,s,v}``),
* two scaled copies of the filling of the marked square of Y, and
* one translate of a fixed filling of the square where the spelling of
  ``x`` changes from its ``u`` version to its ``v`` version.

What is left, ``theta(w)``, lies in the ``t1`` copy of the free-by-cyclic
group and is filled by rewriting its pinches through ``phi``, one relator
filling per fibre letter.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..graphs import FlagComplex2, InputError
from ..groups.oracles import BudgetExceeded
from ..homology import EXACT, Chain, fa_fill
from ..levelset import (DiagonalAlphabet, LevelComplex, d_alphabet, diag_name, flag_to_complex2, grow_region,
                        scaled_copy, translate_chain)
from ..words import Word, format_word, free_reduce, gen_word, inverse

T_LETTERS = ("t1", "t2")
CENTRE = "Q"


def theta(w) -> Word:
    """Send ``t2`` to ``t1`` and fix every other letter."""
    return tuple(("t1", e) if g == "t2" else (g, e) for g, e in w)


def project_t(w) -> Word:
    """Image in ``F(t1, t2)``: delete the fibre letters."""
    return free_reduce(x for x in w if x[0] in T_LETTERS)


@dataclass(frozen=True)
class Piece:
    conjugator: Word  # in F(t1, t2)
    letter: Tuple[str, int]
    index: int  # position of the letter in w

    @property
    def word(self) -> Word:
        return free_reduce(self.conjugator + (self.letter,) + inverse(self.conjugator))


def decompose_word(w) -> List[Piece]:
    """Pieces ``p(w(i-1)) w_i p(w(i))^-1`` for the fibre letters ``w_i``;
    their concatenation freely equals ``w p(w)^-1``."""
    out = []
    prefix: Word = ()
    for i, x in enumerate(w):
        if x[0] in T_LETTERS:
            prefix = free_reduce(prefix + (x,))
        else:
            out.append(Piece(prefix, tuple(x), i))
    return out


def syllables(g) -> List[Tuple[str, int]]:
    out: List[list] = []
    for name, e in free_reduce(g):
        if out and out[-1][0] == name:
            out[-1][1] += e
        else:
            out.append([name, e])
    return [(n, d) for n, d in out if d]


@dataclass
class MassCertificate:
    """Cell counts of a constructive filling.  ``bound`` is the number of
    cells placed (an upper bound for the mass of their sum); in symbolic
    mode the final ``theta(w)`` term is the model ``theta_coef * l^2``."""
    grid_cells: int = 0
    scaled_y_cells: int = 0
    switch_cells: int = 0
    theta_cells: int = 0
    theta_length: int = 0
    theta_modelled: bool = False
    depth: int = 0
    switches: int = 0
    piece_cells: int = 0  # loops filled inside one piece by fill_general
    crossings: List[int] = field(default_factory=list)  # per pass of fill_general
    chain: Optional[Chain] = None

    @property
    def bound(self) -> int:
        return (self.grid_cells + self.scaled_y_cells + self.switch_cells + self.theta_cells
                + self.piece_cells)

    def add(self, other: "MassCertificate"):
        self.grid_cells += other.grid_cells
        self.piece_cells += other.piece_cells
        self.scaled_y_cells += other.scaled_y_cells
        self.switch_cells += other.switch_cells
        self.theta_cells += other.theta_cells
        self.depth = max(self.depth, other.depth)
        self.switches += other.switches

    def to_json(self):
        d = {"grid_cells": self.grid_cells, "scaled_y_cells": self.scaled_y_cells,
             "switch_cells": self.switch_cells, "theta_cells": self.theta_cells,
             "theta_length": self.theta_length, "theta_modelled": self.theta_modelled,
             "depth": self.depth, "switches": self.switches, "piece_cells": self.piece_cells,
             "bound": self.bound}
        if self.crossings:
            d["crossings"] = list(self.crossings)
        if self.chain is not None:
            d["mass"] = self.chain.mass
        return d


def _grid_disk() -> FlagComplex2:
    return FlagComplex2(["t", "s", "u", "v"],
                        [("t", "s"), ("t", "u"), ("s", "u"), ("t", "v"), ("s", "v")],
                        [("t", "s", "u"), ("t", "s", "v")])


def _square_cycle(cx, cyc) -> Chain:
    coeffs = {}
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        e = cx.edge_index(frozenset((a, b)))
        t = cx.vertices[cx.edges[e][0]]
        coeffs[e] = coeffs.get(e, 0) + (1 if t == a else -1)
    return Chain(cx, 1, coeffs)


class LqFiller:
    """Shared state for constructive fillings in one amalgam level set."""

    def __init__(self, am, oracle, slog, theta_radius: int = 3, node_budget: int = 20_000):
        self.am = am
        self.oracle = oracle
        self.slog = slog
        self.alphabet = d_alphabet(slog, am.u, am.v, ambient=am.complex)
        self.lc = LevelComplex(oracle, self.alphabet, am.complex, name="L_G")
        self.theta_radius = theta_radius
        self.node_budget = node_budget
        # the two disks and their fillings of the boundary square
        Y = am.Y.complex
        ycx = flag_to_complex2(Y)
        res = fa_fill(ycx, _square_cycle(ycx, list(am.Y.marked)))
        if res.status != EXACT:
            raise InputError("the marked square does not bound in Y")
        self.y_chain = res.chain
        self.Y = Y
        T = _grid_disk()
        tcx = flag_to_complex2(T)
        self.t_chain = fa_fill(tcx, _square_cycle(tcx, ["t", "u", "s", "v"])).chain
        self.T = T
        self._switch: Dict[str, Chain] = {}
        self._spell: Dict[str, Chain] = {}
        self._rel: Dict[str, Chain] = {}
        self.theta_max_length = 20_000

    # ----------------------------------------------------------- pieces
    def gen_of(self, x: str) -> str:
        return self.slog.basis_of[x]

    def _walk(self, start, w) -> Chain:
        return self.lc.walk(start, w)

    def _disk(self, which, start, first_gen, d, leaf=None) -> Tuple[Chain, int]:
        """Scaled disk whose boundary loop starts at ``start`` with a run of
        ``first_gen``-diagonals; returns the chain and its cell count."""
        orc = self.oracle
        base = orc.mul(start, gen_word(first_gen, d))
        sign = "descending" if d > 0 else "ascending"
        if which == "grid":
            Y, c = self.T, self.t_chain
            gm = {"t": self.slog.t, "s": self.am.s, "u": self.am.u, "v": self.am.v}
        else:
            Y, c = self.Y, self.y_chain
            gm = self.am.A_map(leaf)
        sc = scaled_copy(Y, orc.to_word(base), abs(d), sign, oracle=orc, gen_map=gm, lc=self.lc)
        ch = sc.chain(c)
        return ch, len(c.coeffs) * d * d

    def _scratch_fill(self, loop, symbols=None) -> Chain:
        """Minimal filling of ``loop`` (read from the identity) inside a
        growing neighbourhood of it, built apart from the main complex.
        ``symbols`` restricts the edges used (one piece of the level set)."""
        alpha = self.alphabet
        if symbols is not None:
            alpha = DiagonalAlphabet({k: alpha.symbols[k] for k in symbols}, symbols)
        lc = LevelComplex(self.oracle, alpha, self.am.complex, name="scratch")
        z = lc.walk(self.oracle.identity, loop)
        if z.is_zero():
            return Chain(lc, 2, {})
        seeds = list(lc.vertices)
        for r in range(1, self.theta_radius + 1):
            grow_region(lc, seeds, r)
            res = fa_fill(lc, z, node_budget=self.node_budget)
            if res.status == EXACT:
                return res.chain
        raise BudgetExceeded(f"loop {format_word(loop)} not filled within radius {self.theta_radius}")

    def _relator_fill(self, x: str) -> Chain:
        """Filling of ``t1^-1 x t1 phi(x)^-1`` read from the identity."""
        if x not in self._rel:
            loop = (("t1", -1), (x, 1), ("t1", 1)) + inverse(self.slog.fbc.phi[x])
            self._rel[x] = self._scratch_fill(loop)
        return self._rel[x]

    def _fill_theta(self, w, start) -> Chain:
        """Chain bounding the loop ``w`` over ``x_i, t1`` read from ``start``.

        Innermost pinches ``t1^-e u t1^e`` are rewritten to ``phi^e(u)`` one
        fibre letter at a time; each letter costs one translated relator
        filling.  Free reductions cost nothing.
        """
        orc, X, fbc = self.oracle, self.alphabet.expand, self.slog.fbc
        total = Chain(self.lc, 2, {})
        w = free_reduce(w)
        while True:
            ts = [k for k, (g, _) in enumerate(w) if g == "t1"]
            pinch = next(((a, b) for a, b in zip(ts, ts[1:]) if w[a][1] == -w[b][1]), None)
            if pinch is None:
                break
            a, b = pinch
            e = w[b][1]
            P = orc.mul(start, X(w[:a]))
            out: list = []
            if e == 1:
                # t1^-1 x^s t1 -> phi(x)^s
                for x, sg in w[a + 1:b]:
                    img = fbc.phi[x] if sg == 1 else inverse(fbc.phi[x])
                    if sg == 1:
                        c, sigma = (), 1
                    else:
                        c, sigma = (("t1", -1), (x, -1), ("t1", 1)), -1
                    total = total + self._relator_at(P, c, x, sigma)
                    P = orc.mul(P, X(img))
                    out.extend(img)
            else:
                # t1 u t1^-1 with u = phi(phi^-1(u)) freely; t1 phi(z)^s t1^-1 -> z^s
                u = free_reduce(w[a + 1:b])
                pre = free_reduce(tuple(y for x, sg in u
                                        for y in (fbc.phi_inv[x] if sg == 1 else inverse(fbc.phi_inv[x]))))
                for z, sg in pre:
                    if sg == 1:
                        c, sigma = (("t1", 1),), -1
                    else:
                        c, sigma = (("t1", 1),) + inverse(fbc.phi[z]), 1
                    total = total + self._relator_at(P, c, z, sigma)
                    P = orc.mul(P, X(((z, sg),)))
                    out.append((z, sg))
            w = free_reduce(w[:a] + tuple(out) + w[b + 1:])
            if len(w) > self.theta_max_length:
                raise BudgetExceeded("rewriting the theta loop grew too long")
        if w:
            raise AssertionError("theta loop did not reduce to the empty word")
        return total

    def _relator_at(self, P, c, x: str, sigma: int) -> Chain:
        """Chain of the loop ``c R_x^sigma c^-1`` read from ``P``."""
        ch = translate_chain(self.lc, self._relator_fill(x),
                             self.oracle.to_word(self.oracle.mul(P, self.alphabet.expand(c))))
        return ch if sigma == 1 else -ch

    def _switch_chain(self, x: str, at) -> Tuple[Chain, int]:
        """Translate to ``at`` of a filling of ``x_u x_v^-1``, where ``x_u``
        and ``x_v`` spell ``x`` through ``u`` and through ``v``."""
        if x not in self._switch:
            g, t, u, v = self.gen_of(x), self.slog.t, self.am.u, self.am.v
            loop = ((diag_name(g, u), 1), (diag_name(t, u), -1),
                    (diag_name(t, v), 1), (diag_name(g, v), -1))
            self._switch[x] = self._scratch_fill(loop)
        ch = self._switch[x]
        return translate_chain(self.lc, ch, self.oracle.to_word(at)), ch.mass

    def base_chain(self, P, d: int, x: str, e: int = 1) -> Tuple[Chain, MassCertificate]:
        """Chain with boundary ``[t2^d x^e t2^-d] - [t1^d x^e t1^-d]`` (both
        loops read from ``P``)."""
        orc = self.oracle
        X = self.alphabet.expand
        if e == -1:
            end = orc.mul(P, X(gen_word("t2", d) + ((x, -1),) + gen_word("t2", -d)))
            ch, cert = self.base_chain(end, d, x, 1)
            return -ch, cert
        s, t, v = self.am.s, self.slog.t, self.am.v
        g = self.gen_of(x)
        cert = MassCertificate(depth=1, switches=1)
        comps: List[Chain] = []

        def disk(which, start, first, k, leaf=None):
            if k == 0:
                return
            ch, n = self._disk(which, start, first, k, leaf)
            comps.append(ch)
            if which == "grid":
                cert.grid_cells += n
            else:
                cert.scaled_y_cells += n

        disk("grid", P, t, d)
        at = orc.mul(P, X(gen_word("t2", d)))
        gv = ((g, 1), (v, -1))
        disk("grid", orc.mul(at, gv + X(gen_word("s2", -(d + 1)))), s, d + 1)
        if g != s:
            leaf = self.slog.a.index(g) + 1
            x2 = orc.mul(P, X(gen_word("t1", d) + gen_word("s1", -d)))
            disk("y", x2, s, d, leaf)
            b3 = orc.mul(x2, X(gen_word("s2", d)) + _power(gv, -d))
            disk("y", b3, g, d + 1, leaf)
        ch, n = self._switch_chain(x, at)
        comps.append(ch)
        cert.switch_cells += n
        target = self._walk(P, gen_word("t2", d) + ((x, 1),) + gen_word("t2", -d)) - \
            self._walk(P, gen_word("t1", d) + ((x, 1),) + gen_word("t1", -d))
        return _signed_sum(target, comps), cert

    def base_mass(self, d: int, x: str) -> MassCertificate:
        """Cell counts of ``base_chain`` without building it."""
        cert = MassCertificate(depth=1, switches=1)
        cert.grid_cells = len(self.t_chain.coeffs) * (d * d + (d + 1) ** 2)
        if self.gen_of(x) != self.am.s:
            cert.scaled_y_cells = len(self.y_chain.coeffs) * (d * d + (d + 1) ** 2)
        if x not in self._switch:
            self._switch_chain(x, self.oracle.identity)
        cert.switch_cells = self._switch[x].mass
        return cert

    # ------------------------------------------------------- reductions
    def reduce_conjugate(self, P, g, x: str, e: int = 1, materialize: bool = True):
        """Rewrite ``g x^e g^-1`` (read from ``P``) into
        ``theta(g) x^e theta(g)^-1``.  Returns ``(chain or None, cert)``."""
        syl = syllables(g)
        cert = MassCertificate()
        total: Optional[Chain] = Chain(self.lc, 2, {}) if materialize else None
        if not syl:
            return total, cert
        orc = self.oracle
        X = self.alphabet.expand
        # inner syllable (r, D); h = syl[:k]
        r, D = syl[-1]
        k = len(syl) - 1
        depth = 0

        def switch(r_from, D, k):
            # base vertex: value of the outer part h
            h = tuple(itertools.chain.from_iterable(gen_word(n, d) for n, d in syl[:k]))
            at = orc.mul(P, X(h))
            if materialize:
                ch, c = self.base_chain(at, D, x, e)
            else:
                ch, c = None, self.base_mass(D, x)
            return (ch if r_from == "t2" else (-ch if ch is not None else None)), c

        while True:
            if k == 0:
                if r == "t2":
                    ch, c = switch("t2", D, 0)
                    cert.add(c)
                    depth += 1
                    if materialize:
                        total = total + ch
                break
            r2, d2 = syl[k - 1]
            if r2 != r:
                ch, c = switch(r, D, k)
                cert.add(c)
                depth += 1
                if materialize:
                    total = total + ch
                r = r2
            D += d2
            k -= 1
            if D == 0:
                # the conjugate collapsed; restart from the next syllable
                if k == 0:
                    break
                r, D = syl[k - 1]
                k -= 1
        cert.depth = depth
        return total, cert

    def fill_lq_curve(self, w, materialize: bool = True, theta_coef: float = 1.0,
                      start=None) -> MassCertificate:
        """Filling of the loop ``w`` (a trivial word over ``x_i, t1, t2``)
        read from ``start`` (default the identity)."""
        w = free_reduce(w)
        orc = self.oracle
        X = self.alphabet.expand
        if any(g not in self.slog.basis_of and g not in T_LETTERS for g, _ in w):
            raise InputError("word is not over the letters x_i, t1, t2")
        if not orc.is_trivial(X(w)):
            raise InputError("word is not trivial")
        start = orc.identity if start is None else start
        cert = MassCertificate()
        total = Chain(self.lc, 2, {}) if materialize else None
        P = start
        for pc in decompose_word(w):
            ch, c = self.reduce_conjugate(P, pc.conjugator, pc.letter[0], pc.letter[1], materialize)
            cert.add(c)
            if materialize:
                total = total + ch
            P = orc.mul(P, X(pc.word))
        tw = free_reduce(theta(w))
        cert.theta_length = len(tw)
        if materialize:
            ch = self._fill_theta(tw, start)
            cert.theta_cells = ch.mass
            total = total + ch
            target = self._walk(start, w)
            if total.boundary() != target:
                raise AssertionError("constructed chain does not bound the loop")
            cert.chain = total
        else:
            cert.theta_modelled = True
            cert.theta_cells = int(round(theta_coef * len(tw) ** 2))
        return cert

    # ------------------------------------------------- whole level set
    def kind(self, sym) -> object:
        """Leaf index of an edge symbol with a ``y`` letter, else ``"Q"``."""
        for g, _ in self.alphabet.symbols[sym]:
            if self.am.is_y_letter(g):
                return self.am.piece_of_y_letter(g)
        return CENTRE

    def piece_symbols(self, kind) -> Tuple[str, ...]:
        if kind == CENTRE:
            return tuple(x for x in self.alphabet.edge_symbols if self.kind(x) == CENTRE)
        gens = set(self.am.A_map(kind).values())
        return tuple(x for x in self.alphabet.edge_symbols
                     if all(g in gens for g, _ in self.alphabet.symbols[x]))

    def e_symbols(self, i: int) -> Tuple[str, ...]:
        el = self.oracle.e_letters(i)
        return tuple(x for x in self.alphabet.edge_symbols
                     if all(g in el for g, _ in self.alphabet.symbols[x]))

    def e_geodesic(self, i: int, target, max_nodes: int = 500_000) -> Word:
        """Shortest path over the ``E_i`` diagonals spelling ``target`` (a
        height-zero word in ``a_i, s, u, v``), searched in ``E_i`` itself."""
        am = self.am
        left = {am.a[i - 1], am.s}
        syms = self.e_symbols(i)

        def key(w):
            return (free_reduce(x for x in w if x[0] in left),
                    free_reduce(x for x in w if x[0] not in left))

        goal = key(target)
        start = ((), ())
        prev = {start: None}
        frontier = [start]
        while goal not in prev:
            nxt = []
            for k in frontier:
                for sym in syms:
                    d = self.alphabet.symbols[sym]
                    for e in (1, -1):
                        k2 = key(k[0] + k[1] + (d if e == 1 else inverse(d)))
                        if k2 not in prev:
                            prev[k2] = (k, (sym, e))
                            nxt.append(k2)
            if not nxt or len(prev) > max_nodes:
                raise BudgetExceeded("edge-group geodesic search exceeded its budget")
            frontier = nxt
        out = []
        k = goal
        while prev[k] is not None:
            k, step = prev[k]
            out.append(step)
        return tuple(out[::-1])

    def d_spelling(self, sym) -> Word:
        """The edge symbol ``g/h`` as a word over ``x_i, t1, t2``."""
        xs = self.slog.x_of
        special = {self.slog.t: (), self.am.u: (("t1", -1),), self.am.v: (("t2", -1),)}

        def spell(g):
            return special[g] if g in special else ((xs[g], 1),)

        (g, _), (h, _) = self.alphabet.symbols[sym]
        return free_reduce(spell(g) + inverse(spell(h)))

    def _runs(self, kinds):
        runs = []
        for j, k in enumerate(kinds):
            if runs and runs[-1][0] == k:
                runs[-1][2] = j
            else:
                runs.append([k, j, j])
        return runs

    def _innermost(self, runs, syms):
        """First run that lies in an edge group: a leaf run, or a centre run
        between two runs of the same leaf."""
        orc = self.oracle
        X = self.alphabet.expand
        for j, (k, lo, hi) in enumerate(runs):
            word = X(syms[lo:hi + 1])
            try:
                if k != CENTRE:
                    if orc.membership_E_in_A(k, word):
                        return j, k, orc.a_oracles[k].normal_form(word)
                elif 0 < j < len(runs) - 1 and runs[j - 1][0] == runs[j + 1][0]:
                    i = runs[j - 1][0]
                    wit = orc.e_witness_in_Q(i, word)
                    if wit is not None:
                        return j, i, wit
            except BudgetExceeded:
                continue
        raise BudgetExceeded("no innermost piece found within the membership budget")

    def fill_general(self, w, start=None) -> MassCertificate:
        """Filling of a loop in the level set of ``G`` (a trivial word over
        the edge symbols).  Each pass replaces one innermost excursion into
        a piece by a geodesic in the separating edge-group level set, which
        removes two crossings between pieces; what is left lies in one piece
        and is filled there."""
        orc, lc = self.oracle, self.lc
        X = self.alphabet.expand
        w = tuple(tuple(x) for x in w)
        if any(g not in self.alphabet.edge_symbols for g, _ in w):
            raise InputError("word is not over the edge symbols")
        if not orc.is_trivial(X(w)):
            raise InputError("word is not trivial")
        start = orc.identity if start is None else start
        target = lc.walk(start, w)
        total = Chain(lc, 2, {})
        cert = MassCertificate()
        syms = list(w)
        kinds = [self.kind(g) for g, _ in w]
        P = start
        while True:
            runs = self._runs(kinds)
            if len(runs) > 1 and runs[0][0] == runs[-1][0]:
                # rotate so the loop starts where it changes piece
                k = runs[-1][1]
                P = orc.mul(P, X(syms[:k]))
                syms, kinds = syms[k:] + syms[:k], kinds[k:] + kinds[:k]
                runs = self._runs(kinds)
            cert.crossings.append(crossings(kinds))
            if len(runs) <= 1:
                break
            j, i, ew = self._innermost(runs, syms)
            kind, lo, hi = runs[j]
            gam = tuple(syms[lo:hi + 1])
            gam2 = self.e_geodesic(i, ew)
            p = orc.mul(P, X(syms[:lo]))
            ch = self._scratch_fill(gam + inverse(gam2), self.piece_symbols(kind))
            ch = translate_chain(lc, ch, orc.to_word(p))
            cert.piece_cells += ch.mass
            total = total + ch
            new_kind = CENTRE if kind != CENTRE else i
            syms = syms[:lo] + list(gam2) + syms[hi + 1:]
            kinds = kinds[:lo] + [new_kind] * len(gam2) + kinds[hi + 1:]
        kind = kinds[0] if kinds else CENTRE
        if kind != CENTRE:
            ch = translate_chain(lc, self._scratch_fill(tuple(syms), self.piece_symbols(kind)),
                                 orc.to_word(P))
            cert.piece_cells += ch.mass
            total = total + ch
        else:
            # respell each edge over x_i, t1, t2 and hand over to fill_lq_curve
            dw = []
            cur = P
            for sym, e in syms:
                sp = self.d_spelling(sym)
                tail = cur if e == 1 else orc.mul(cur, X(((sym, -1),)))
                if sym not in self._spell:
                    self._spell[sym] = self._scratch_fill(((sym, 1),) + inverse(sp))
                ch = translate_chain(lc, self._spell[sym], orc.to_word(tail))
                cert.piece_cells += ch.mass
                total = total + ch * e
                dw.extend(sp if e == 1 else inverse(sp))
                cur = orc.mul(cur, X(((sym, e),)))
            sub = self.fill_lq_curve(tuple(dw), start=P)
            cert.add(sub)
            cert.theta_length = sub.theta_length
            total = total + sub.chain
        if total.boundary() != target:
            raise AssertionError("constructed chain does not bound the loop")
        cert.chain = total
        return cert


def crossings(kinds) -> int:
    """How often a loop with these edge kinds passes between pieces; a
    step straight from one leaf into another goes through the centre and
    counts twice."""
    n = 0
    for a, b in zip(kinds, kinds[1:] + kinds[:1]):
        if a != b:
            n += 2 if CENTRE not in (a, b) else 1
    return n


def _power(w, k):
    return tuple(w) * k if k >= 0 else inverse(w) * -k


def _signed_sum(target: Chain, comps: List[Chain]) -> Chain:
    bds = [c.boundary() for c in comps]
    for signs in itertools.product((1, -1), repeat=len(comps)):
        acc = Chain(target.complex, 1, {})
        for s, b in zip(signs, bds):
            acc = acc + b * s
        if acc == target:
            out = Chain(target.complex, 2, {})
            for s, c in zip(signs, comps):
                out = out + c * s
            return out
    raise AssertionError("the pieces of the switching loop do not assemble")
