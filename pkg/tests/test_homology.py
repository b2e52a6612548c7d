import itertools
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehnfill.fillings.delta import cayley_ball, word_cycle
from dehnfill.graphs import FlagComplex2
from dehnfill.groups import raag_oracle, raag_presentation
from dehnfill.homology import (
    EXACT, Chain, Complex2, boundary, fa_fill, fa_profile, h1_smith,
)
from dehnfill.lp import OPTIMAL, intlinprog_exact, linprog_exact
from dehnfill.snf import invariant_factors, sparse_invariant_factors
from dehnfill.words import as_word as W

from conftest import K2

matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


def determinantal_divisors(a):
    """d_k = gcd of all k x k minors."""
    m = np.array(a, dtype=float)
    r, c = m.shape
    out = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = gcd(g, int(round(np.linalg.det(m[np.ix_(rows, cols)]))))
        if g == 0:
            break
        out.append(g)
    return out


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_invariant_factors_match_minors(a):
    d = determinantal_divisors(a)
    expected = [d[0]] + [d[k] // d[k - 1] for k in range(1, len(d))] if d else []
    got = [abs(x) for x in invariant_factors(a)]
    assert got == expected
    assert all(got[i + 1] % got[i] == 0 for i in range(len(got) - 1))


@given(matrices)
@settings(max_examples=50, deadline=None)
def test_sparse_matches_dense(a):
    cols = [{i: a[i][j] for i in range(len(a))} for j in range(len(a[0]))]
    assert sorted(abs(x) for x in sparse_invariant_factors(cols, len(a))) == \
        sorted(abs(x) for x in invariant_factors(a))


def test_linprog_small():
    # min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
    res = linprog_exact([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert res.status == OPTIMAL
    assert res.value == Fraction(-14, 5)


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=3),
       st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(1, 6), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_intlinprog_matches_enumeration(c, rows, b):
    n = len(c)
    A = [r[:n] for r in rows]
    b = b[:len(A)]
    # bounded box so that enumeration is an oracle
    A_box = A + [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    b_box = b + [4] * n
    res = intlinprog_exact(c, A_ub=A_box, b_ub=b_box)
    best = min(sum(ci * xi for ci, xi in zip(c, x))
               for x in itertools.product(range(5), repeat=n)
               if all(sum(r[j] * x[j] for j in range(n)) <= bi for r, bi in zip(A_box, b_box)))
    assert res.status == OPTIMAL and res.value == best


def cycle_graph(n):
    vs = [str(i) for i in range(n)]
    return FlagComplex2(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def test_h1_examples():
    assert h1_smith(cycle_graph(5)).rank == 1
    disk = FlagComplex2("abco", [("a", "b"), ("b", "c"), ("c", "a")] +
                        [(x, "o") for x in "abc"],
                        [("a", "b", "o"), ("b", "c", "o"), ("c", "a", "o")])
    assert h1_smith(disk).is_trivial()
    # six-vertex projective plane
    rp2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2), (2, 3, 5), (3, 4, 6),
           (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    edges = {tuple(sorted(p)) for t in rp2 for p in itertools.combinations(t, 2)}
    h = h1_smith(FlagComplex2([str(i) for i in range(1, 7)], edges, rp2))
    assert h.rank == 0 and list(h.torsion) == [2]


def unit_square_complex():
    cx = Complex2("square")
    e = [cx.add_edge(a, b) for a, b in (("p", "q"), ("q", "r"), ("r", "s"), ("s", "p"))]
    cx.add_face([(i, 1) for i in e], "F")
    return cx, e


def test_boundary_examples():
    cx, e = unit_square_complex()
    assert boundary(cx.face_chain(0)) == Chain(cx, 1, {i: 1 for i in e})
    # two faces sharing an edge: the shared edge cancels
    cx2 = Complex2()
    a = [cx2.add_edge(x, y) for x, y in (("p", "q"), ("q", "r"), ("r", "p"), ("r", "s"),
                                         ("s", "p"))]
    cx2.add_face([(a[0], 1), (a[1], 1), (a[2], 1)], "L")
    cx2.add_face([(a[2], -1), (a[3], 1), (a[4], 1)], "R")
    bd = (cx2.face_chain(0) + cx2.face_chain(1)).boundary()
    assert a[2] not in bd.coeffs and bd.mass == 4


def test_fa_unit_square():
    cx, e = unit_square_complex()
    res = fa_fill(cx, {i: 1 for i in e})
    assert res.status == EXACT and res.mass == 1


@pytest.fixture(scope="module")
def z2_ball():
    orc = raag_oracle(K2)
    return cayley_ball(raag_presentation(K2), orc, 8), orc


def grid(n):
    return W(" ".join(["a"] * n + ["b"] * n + ["a^-1"] * n + ["b^-1"] * n))


def test_fa_two_components(z2_ball):
    cx, orc = z2_ball
    far = orc.element(W("a a a b b b"))
    c = word_cycle(cx, orc, W("a b a^-1 b^-1")) + word_cycle(cx, orc, W("a b a^-1 b^-1"), far)
    res = fa_fill(cx, c)
    assert res.status == EXACT and res.mass == 2


def test_fa_profile(z2_ball):
    cx, orc = z2_ball
    assert fa_profile(cx, [])["table"] == {}
    table = fa_profile(cx, [word_cycle(cx, orc, grid(n)) for n in range(1, 5)])["table"]
    assert table == {4: 1, 8: 4, 12: 9, 16: 16}


def test_fa_rejects_non_cycle():
    cx, e = unit_square_complex()
    with pytest.raises(ValueError):
        fa_fill(cx, {e[0]: 1})
