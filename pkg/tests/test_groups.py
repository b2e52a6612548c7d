import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehnfill.complexes import amalgam_complex
from dehnfill.graphs import InputError, SimpleGraph
from dehnfill.groups import (
    AmalgamOracle, DoubleOracle, FbcOracle, FreeByCyclic, d_presentation, free_oracle,
    free_presentation, height, in_subgroup, log_presentation, membership_E_in_A,
    membership_E_in_Q, product_oracle, raag_oracle, raag_presentation, slog_to_free_by_cyclic,
)
from dehnfill.groups.oracles import nielsen_inverse
from dehnfill.words import as_word as W
from dehnfill.words import format_word, free_reduce, inverse

from conftest import C4, K2, K3, load_log

UNIPOTENT = FreeByCyclic(["x1", "x2", "x3"], {"x1": W("x1"), "x2": W("x2 x1"),
                                              "x3": W("x3 x2")})


def words(letters, max_len=10):
    return st.lists(st.sampled_from(letters), max_size=max_len).map(tuple)


def signed(gens):
    return [(g, e) for g in gens for e in (1, -1)]


# ------------------------------------------------------------ presentations

def test_raag_presentation():
    assert [format_word(r) for r in raag_presentation(K2).relators] == ["a b a^-1 b^-1"]
    assert raag_presentation(SimpleGraph(["a", "b"])).relators == ()
    assert len(raag_presentation(C4).relators) == 4


def test_log_presentation(z2_slog, at_slog):
    p = log_presentation(z2_slog)
    assert len(p.relators) == 1 and len(p.relators[0]) == 4
    assert {g for g, _ in p.relators[0]} == {"s", "t"}
    assert all(len(r) == 4 for r in log_presentation(at_slog).relators)
    assert free_presentation("ab").relators == ()


def test_z2_slog_is_trivial_extension(z2_slog):
    slog = slog_to_free_by_cyclic(z2_slog)
    assert slog.fbc.rank == 1
    assert slog.fbc.phi == {"x1": W("x1")}


def test_exp_slog_monodromy(exp_slog):
    fbc = slog_to_free_by_cyclic(exp_slog).fbc
    # lengths of phi^k(x1) grow like (1 + sqrt 2)^k
    lens = [len(fbc.apply(W("x1"), k)) for k in range(1, 9)]
    assert all(b > a for a, b in zip(lens, lens[1:]))
    assert lens[-1] / lens[-2] > 2.2


def test_nielsen_inverse_round_trip():
    inv = nielsen_inverse(UNIPOTENT.basis, UNIPOTENT.phi)
    for x in UNIPOTENT.basis:
        assert UNIPOTENT.apply(inv[x]) == ((x, 1),)


def test_phi_must_be_onto():
    with pytest.raises(InputError):
        FreeByCyclic(["x1", "x2"], {"x1": W("x1 x1"), "x2": W("x2")})


# ------------------------------------------------------------ oracles

def test_fbc_relations():
    orc = FbcOracle(UNIPOTENT)
    for x in UNIPOTENT.basis:
        w = W(f"t^-1 {x} t") + inverse(UNIPOTENT.phi[x])
        assert orc.is_trivial(w)
    assert not orc.is_trivial(W("x1 x2 x1^-1 x2^-1"))


def test_free_part():
    orc = FbcOracle(UNIPOTENT)
    assert orc.free_part(W("t^-1 x3 t")) == W("x3 x2")
    assert orc.free_part(W("t x1")) is None


def test_double_oracle_relators(exp_slog):
    fbc = slog_to_free_by_cyclic(exp_slog).fbc
    orc = DoubleOracle(fbc)
    for r in d_presentation(fbc).relators:
        assert orc.is_trivial(r)
    assert orc.is_trivial(W("t1 x1 t1^-1 t2 x1^-1 t2^-1"))
    assert not orc.is_trivial(W("t1 t2^-1"))


def test_raag_relators_and_free():
    orc = raag_oracle(K3)
    for r in raag_presentation(K3).relators:
        assert orc.is_trivial(r)
    assert not raag_oracle(C4).is_trivial(W("a c a^-1 c^-1"))
    assert not free_oracle("ab").is_trivial(W("a b a^-1 b^-1"))


def test_product_oracle():
    orc = product_oracle(free_oracle("a"), free_oracle("b"))
    assert orc.is_trivial(W("a b a^-1 b^-1"))


def test_ball_sizes():
    # Z^2 ball of radius r has 2r^2 + 2r + 1 elements
    orc = raag_oracle(K2)
    assert [len(orc.ball(r)) for r in range(4)] == [1, 5, 13, 25]


@given(words(signed("abc")))
@settings(max_examples=80, deadline=None)
def test_raag_normal_form_properties(w):
    orc = raag_oracle(K3)
    assert orc.is_trivial(w + inverse(w))
    nf = orc.normal_form(w)
    assert orc.equal(nf, w)
    assert len(nf) <= len(free_reduce(w))


@given(words(signed(["x1", "x2", "x3", "t"])))
@settings(max_examples=80, deadline=None)
def test_fbc_inverse_and_normal_form(w):
    orc = FbcOracle(UNIPOTENT)
    assert orc.is_trivial(w + inverse(w))
    assert orc.element(orc.normal_form(w)) == orc.element(w)


@given(st.lists(st.sampled_from(["x1", "x2", "x3"]), max_size=6))
@settings(max_examples=40, deadline=None)
def test_subgroup_membership(gens):
    # every product of generators lies in the subgroup they generate
    sub = [W(g) for g in gens] or [W("x1")]
    w = tuple(l for g in sub for l in g)
    assert in_subgroup(w, sub)


def test_subgroup_membership_negative():
    assert in_subgroup(W("a b a^-1"), [W("a"), W("b")])
    assert not in_subgroup(W("a"), [W("a a")])


# ------------------------------------------------------------ amalgam

@pytest.fixture(scope="module")
def at_amalgam(at_slog, default_Y):
    am = amalgam_complex(at_slog, default_Y, allow_unasserted=True)
    return am, AmalgamOracle(am, slog_to_free_by_cyclic(at_slog))


def test_membership_in_E(at_amalgam):
    am, orc = at_amalgam
    assert membership_E_in_A(orc, 1, W("a u a^-1"))
    assert not membership_E_in_A(orc, 1, W("y1_1"))
    assert membership_E_in_A(orc, 1, W("y1_1 a y1_1^-1"))
    assert membership_E_in_Q(orc, 1, W("s"))
    assert not membership_E_in_Q(orc, 1, W("t"))
    assert membership_E_in_Q(orc, 1, W("a s^-1"))


def test_amalgam_word_problem(at_amalgam):
    am, orc = at_amalgam
    assert orc.is_trivial(W("a u a^-1 u^-1"))
    assert not orc.is_trivial(W("u v u^-1 v^-1"))
    assert orc.is_trivial(W("y1_1 s y1_1^-1 s^-1"))
    assert not orc.is_trivial(W("y1_1 t y1_1^-1 t^-1"))
    for r in am.complex.relators():
        assert orc.is_trivial(r)


@given(words(signed(["a", "s", "t", "u", "v", "y1_1"]), max_len=8))
@settings(max_examples=60, deadline=None)
def test_amalgam_keys_consistent(at_amalgam, w):
    am, orc = at_amalgam
    key = orc.element(w)
    assert orc.element(orc.to_word(key)) == key
    assert orc.element(orc.reduced_word(w)) == key
    assert orc.is_trivial(w + inverse(w))


def test_height():
    assert height(W("a u s^-1")) == 1
    assert height(()) == 0
    assert height(W("a b^-1")) == 0
