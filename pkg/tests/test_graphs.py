import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehnfill.graphs import (
    INFINITE, FlagComplex2, InputError, Log, SimpleGraph, ThompsonComplexData,
    computable_checks_pass, flag_completion, girth, is_flag, is_tree, verify_thompson_input,
)

from conftest import C4, K2, K3, K4, graph


def test_flag_completion_counts():
    assert len(flag_completion(K3).triangles) == 1
    assert len(flag_completion(C4).triangles) == 0
    # K4: every 3-subset of 4 vertices spans
    assert len(flag_completion(K4).triangles) == 4


def test_is_flag():
    empty_tri = FlagComplex2("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    ok, witness = is_flag(empty_tri)
    assert not ok and set(witness) == {"a", "b", "c"}
    assert is_flag(flag_completion(K3)) == (True, None)
    # octahedron: three antipodal pairs, all other pairs adjacent
    pairs = [("1", "2"), ("3", "4"), ("5", "6")]
    verts = "123456"
    edges = [(x, y) for x, y in itertools.combinations(verts, 2) if (x, y) not in pairs]
    tris = [t for t in itertools.combinations(verts, 3)
            if all(p not in itertools.combinations(t, 2) for p in pairs)]
    assert len(tris) == 8
    assert is_flag(FlagComplex2(verts, edges, tris))[0]


def test_flag_rejects_four_clique():
    ok, witness = is_flag(flag_completion(K4))
    assert not ok and len(witness) == 4


def test_girth_and_tree():
    assert girth(C4) == 4
    assert girth(K3) == 3
    assert girth(graph([("1", "2"), ("2", "3"), ("3", "4"), ("4", "5")])) == INFINITE
    assert is_tree(K2)
    assert not is_tree(C4)
    assert not is_tree(graph([("a", "b"), ("c", "d")]))


def test_bad_input_rejected():
    with pytest.raises(InputError):
        SimpleGraph(["a"], [("a", "a")])
    with pytest.raises(InputError):
        FlagComplex2("ab", [("a", "b")], [("a", "b", "c")])
    with pytest.raises(InputError):
        Log(["a", "b"], [("a", "b", "a")])


def test_thompson_checks(default_Y):
    c4 = ThompsonComplexData(FlagComplex2("abcd", [("a", "b"), ("b", "c"), ("c", "d"),
                                                   ("d", "a")]), ("a", "b", "c", "d"))
    rep = verify_thompson_input(c4)
    assert not rep["H1 = 0"]
    assert not computable_checks_pass(rep)
    rep = verify_thompson_input(default_Y)
    assert computable_checks_pass(rep)
    # the shipped stand-in does not carry the simplicity assertion
    assert not rep.passed


def test_disk_with_marked_boundary_rejected():
    # cone over the marked 4-cycle: computable checks pass, assertion missing
    disk = FlagComplex2("abcdo", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")] +
                        [(x, "o") for x in "abcd"],
                        [("a", "b", "o"), ("b", "c", "o"), ("c", "d", "o"), ("d", "a", "o")])
    rep = verify_thompson_input(ThompsonComplexData(disk, ("a", "b", "c", "d")))
    assert computable_checks_pass(rep) and not rep.passed


def test_json_round_trip(default_Y):
    again = ThompsonComplexData.from_json(default_Y.to_json())
    assert again == default_Y


@st.composite
def graphs(draw, max_vertices=7):
    n = draw(st.integers(1, max_vertices))
    verts = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(verts, 2))
    edges = [p for p in pairs if draw(st.booleans())]
    return SimpleGraph(verts, edges)


@given(graphs())
@settings(max_examples=60, deadline=None)
def test_flag_completion_is_flag_without_four_cliques(g):
    c = flag_completion(g)
    assert set(c.triangles) == {frozenset(t) for t in g.cliques(3)}
    assert is_flag(c)[0] == (not g.cliques(4))


@given(graphs())
@settings(max_examples=60, deadline=None)
def test_tree_iff_connected_forest(g):
    assert is_tree(g) == (g.is_connected() and girth(g) == INFINITE)
