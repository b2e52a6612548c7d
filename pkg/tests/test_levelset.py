import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehnfill.complexes import amalgam_complex, log_complex, product_with_wedge, salvetti
from dehnfill.graphs import InputError, flag_completion
from dehnfill.groups import AmalgamOracle, raag_oracle, slog_to_free_by_cyclic
from dehnfill.homology import EXACT, Chain, fa_fill, h1_smith
from dehnfill.levelset import (
    PieceTag, d_alphabet, diagonal_generators, flag_to_complex2, level_ball, scaled_copy,
    stretched_complex_tags, translate_chain,
)
from dehnfill.words import as_word as W

from conftest import K2, K3


def test_diagonal_generators(z2_slog):
    assert list(diagonal_generators(salvetti(K2)).symbols.values()) == [W("a b^-1")]
    alpha = diagonal_generators(log_complex(z2_slog))
    assert len(alpha.edge_symbols) == 1
    q = product_with_wedge(log_complex(z2_slog), 2, ("u", "v"))
    names = set(diagonal_generators(q).edge_symbols)
    assert {"t/u", "t/v", "s/u", "s/v"} <= names


def test_d_alphabet(exp_slog):
    slog = slog_to_free_by_cyclic(exp_slog)
    alpha = d_alphabet(slog)
    assert alpha.expand(W("t1")) == W("t u^-1")
    assert alpha.expand(W("x1")) == W("a t^-1")
    # the x letters are edge paths through two diagonals
    assert alpha.edge_path(W("x1")) == W("a/u t/u^-1")
    for k in alpha.symbols:
        assert sum(e for _, e in alpha.expand(((k, 1),))) == 0


def test_level_ball_raag():
    lc = level_ball(raag_oracle(K2), diagonal_generators(salvetti(K2)), 4, salvetti(K2))
    assert lc.counts == (9, 8, 0)
    c = salvetti(K3)
    lc = level_ball(raag_oracle(K3), diagonal_generators(c), 2, c)
    assert len(lc.faces) > 0
    assert h1_smith(lc).is_trivial()
    assert lc.cell_heights_ok()


@pytest.mark.parametrize("r", [1, 3, 8])
def test_z2_level_set_is_a_line(z2_slog, r):
    c = log_complex(z2_slog)
    lc = level_ball(slog_to_free_by_cyclic(z2_slog).oracle(), diagonal_generators(c), r, c)
    assert lc.counts == (2 * r + 1, 2 * r, 0)


def test_level_ball_budget():
    with pytest.raises(InputError):
        level_ball(raag_oracle(K3), diagonal_generators(salvetti(K3)), 6, salvetti(K3),
                   max_vertices=50)


def y_fill(Y):
    """A 2-chain of Y bounding the marked 4-cycle."""
    cx = flag_to_complex2(Y.complex)
    cyc = {}
    ring = list(Y.marked) + [Y.marked[0]]
    for p, q in zip(ring, ring[1:]):
        e = cx.edge_index(frozenset((p, q)))
        cyc[e] = 1 if cx.vertices[cx.edges[e][0]] == p else -1
    res = fa_fill(cx, cyc)
    assert res.status == EXACT
    return cx, Chain(cx, 1, cyc), res.chain


def test_scaled_copy_single_triangle():
    Y = flag_completion(K3)
    sc = scaled_copy(Y, W("a a"), 2)
    assert sc.n_faces == 4
    bd = sc.fundamental_chain().boundary()
    assert len(bd.coeffs) == 6


def test_scaled_copy_scale_one(default_Y):
    sc = scaled_copy(default_Y.complex, W("a"), 1)
    assert sc.n_faces == len(default_Y.complex.triangles)
    assert len(sc.lc.vertices) == len(default_Y.complex.vertices)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("sign", ["descending", "ascending"])
def test_scaled_copy_boundary(default_Y, d, sign):
    Y = default_Y.complex
    cx, cyc, fill = y_fill(default_Y)
    base = W(" ".join(["a"] * d)) if sign == "descending" else W(" ".join(["a^-1"] * d))
    sc = scaled_copy(Y, base, d, sign)
    assert sc.chain(fill).boundary() == sc.cycle(cyc)
    assert sc.lc.cell_heights_ok()


def test_scaled_copy_rejects_bad_base(default_Y):
    with pytest.raises(InputError):
        scaled_copy(default_Y.complex, W("a"), 2)


@given(st.lists(st.sampled_from(["a/b", "a/c", "b/c"]), min_size=1, max_size=4),
       st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4))
@settings(max_examples=30, deadline=None)
def test_translate_preserves_boundary(syms, signs):
    c = salvetti(K3)
    lc = level_ball(raag_oracle(K3), diagonal_generators(c), 2, c)
    face = lc.face_chain(0)
    g = tuple((s, e) for s, e in zip(syms, signs))
    word = diagonal_generators(c).expand(g)
    moved = translate_chain(lc, face, word)
    assert moved.mass == 1
    assert moved.boundary().mass == face.boundary().mass


def test_piece_tags(at_slog, default_Y):
    am = amalgam_complex(at_slog, default_Y, allow_unasserted=True)
    orc = AmalgamOracle(am, slog_to_free_by_cyclic(at_slog))
    alpha = diagonal_generators(am.complex)
    lc = level_ball(orc, alpha, 1, am.complex, close=False)
    extra = ["a u^-1", "u^-1 y1_1", "y1_1 t u^-1"]
    for w in extra:
        lc.add_vertex(orc.element(W(w)))
    tags = stretched_complex_tags(lc)["vertices"]
    tag = lambda w: tags[lc.vertex_index(orc.element(W(w)))]
    assert tags[lc.vertex_index(orc.identity)] == PieceTag("Q", ())
    assert tag("a u^-1").kind == "E"
    # needs a y letter; u lies in A1 so this is the root A1 copy, whichever
    # spelling (y u^-1 or u^-1 y) the oracle keeps
    assert tag("u^-1 y1_1") == PieceTag("A", (1,), ())
    # a Q copy behind the coset of y
    assert tag("y1_1 t u^-1") == PieceTag("Q", (), W("y1_1"))
