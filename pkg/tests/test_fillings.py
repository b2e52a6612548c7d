import csv
import io
import random

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehnfill.fillings.delta import (
    EXACT, NO_FILLING, cayley_ball, compatible_radius, delta_fill, replay, word_cycle,
)
from dehnfill.fillings.distortion import distortion
from dehnfill.fillings.experiments import (
    GapConfig, gap_experiment, hard_curve, report_tables, validate_report,
)
from dehnfill.fillings.growth import EXPONENTIAL, POLYNOMIAL, dominated, growth_fit
from dehnfill.graphs import InputError
from dehnfill.groups import FreeByCyclic, free_presentation, raag_oracle, raag_presentation
from dehnfill.homology import fa_fill
from dehnfill.words import as_word as W
from dehnfill.words import free_reduce

from conftest import DATA, K2

Z2 = raag_presentation(K2)
STEP = {("a", 1): (1, 0), ("a", -1): (-1, 0), ("b", 1): (0, 1), ("b", -1): (0, -1)}


def winding_area(w):
    """Sum over unit cells of |winding number|: the area of a loop in Z^2."""
    x = y = 0
    wind = {}
    for g, e in w:
        dx, dy = STEP[(g, e)]
        if dx:
            # crossing the column of cells above the horizontal edge
            cx = min(x, x + dx)
            for cy in range(-20, y):
                wind[(cx, cy)] = wind.get((cx, cy), 0) + dx
        x, y = x + dx, y + dy
    assert (x, y) == (0, 0)
    return sum(abs(v) for v in wind.values())


@st.composite
def z2_loops(draw, max_half=5):
    half = draw(st.lists(st.sampled_from(list(STEP)), min_size=1, max_size=max_half))
    back = [(g, -e) for g, e in half]
    back = draw(st.permutations(back))
    return free_reduce(tuple(half) + tuple(back))


def test_delta_examples():
    assert delta_fill(Z2, W("a b a^-1 b^-1")).area == 1
    res = delta_fill(Z2, W("a a b b a^-1 a^-1 b^-1 b^-1"), length_budget=16)
    assert res.status == EXACT and res.area == 4
    assert replay(Z2, res.certificate)
    res = delta_fill(free_presentation("ab"), W("a b a^-1 b^-1"))
    assert res.status == NO_FILLING


def test_delta_nontrivial_word():
    res = delta_fill(Z2, W("a b"), oracle=raag_oracle(K2))
    assert res.status == NO_FILLING


@given(z2_loops())
@settings(max_examples=60, deadline=None)
def test_delta_matches_winding_area(w):
    res = delta_fill(Z2, w, area_budget=30, length_budget=len(w) + 6)
    if res.status == EXACT:
        assert res.area == winding_area(w)
        assert replay(Z2, res.certificate)
    else:
        assert res.lower_bound <= winding_area(w)


@pytest.fixture(scope="module")
def z2_ball():
    orc = raag_oracle(K2)
    return cayley_ball(Z2, orc, 6), orc


@given(z2_loops())
@settings(max_examples=60, deadline=None)
def test_fa_matches_winding_area(z2_ball, w):
    cx, orc = z2_ball
    res = fa_fill(cx, word_cycle(cx, orc, w))
    assert res.mass == winding_area(w)


def test_compatible_radius():
    orc = raag_oracle(K2)
    res = delta_fill(Z2, W("a a b a^-1 a^-1 b^-1"))
    assert compatible_radius(Z2, res.certificate, orc) >= 2


# ------------------------------------------------------------ distortion

def fbc(phi):
    return FreeByCyclic(sorted(phi), {k: W(v) for k, v in phi.items()})


def test_distortion_identity():
    table = distortion(fbc({"x1": "x1"}), 8)
    assert table.as_dict() == {l: l for l in range(1, 9)}
    assert table.verify(fbc({"x1": "x1"}))


def test_distortion_beyond_the_ball():
    # rows past the exact radius still reach the free length of x1^l
    f = fbc({"x1": "x1", "x2": "x2"})
    table = distortion(f, 12, ball_budget=2000)
    assert table.exact_radius < 12
    assert table.as_dict() == {l: l for l in range(1, 13)}
    assert table.verify(f)


def test_distortion_witnesses_verify():
    f = fbc({"x1": "x2", "x2": "x2 x1"})
    table = distortion(f, 10, ball_budget=5000)
    assert table.exact_radius < 10
    assert table.verify(f)
    vals = [r.value for r in table.rows]
    assert vals == sorted(vals)


# ------------------------------------------------------------ growth

def test_growth_fit_examples():
    assert growth_fit({n: n * n for n in range(1, 10)}).exponent == pytest.approx(2.0)
    assert growth_fit({n: 2 ** n for n in range(1, 12)}).verdict == EXPONENTIAL
    assert growth_fit({n: 7 for n in range(1, 8)}).exponent == pytest.approx(0.0, abs=1e-9)
    assert growth_fit({n: n ** 3 for n in range(1, 12)}).verdict == POLYNOMIAL
    with pytest.raises(ValueError):
        growth_fit({1: 1, 2: 2})


def test_dominated():
    sq = {n: n * n for n in range(1, 40)}
    assert dominated({n: 3 * n * n for n in range(1, 5)}, sq) is not None
    sq = {n: n * n for n in range(1, 200)}
    assert dominated({n: 2 ** n for n in range(1, 31)}, sq, c_max=3) is None
    # points whose rescaled argument is not tabulated are skipped
    assert dominated({50: 10 ** 9}, {n: n * n for n in range(1, 60)}) == 2


# ------------------------------------------------------------ experiment

def test_hard_curve():
    assert hard_curve(1, "x1") == W("t1 x1 t1^-1 t2 x1^-1 t2^-1")
    assert len(hard_curve(3, "x1 x2")) == 4 * 3 + 4
    with pytest.raises(InputError):
        hard_curve(0, "x1")
    with pytest.raises(InputError):
        hard_curve(1, "")


@pytest.fixture(scope="module")
def z2_report():
    cfg = GapConfig(slog=DATA / "slog_z2.json", Y=DATA / "default_Y.json", n_max=1,
                    dist_lmax=6, timing=False)
    return gap_experiment(cfg)


def test_gap_degenerate(z2_report):
    validate_report(z2_report)
    row = z2_report["rows"][0]
    assert row["trivial"] and row["height"] == 0
    assert row["fa"]["status"] == "exact" and row["delta"]["status"] == "exact"
    assert row["fa"]["mass"] == row["delta"]["area"]
    assert z2_report["checks"]["passed"]
    assert [r["dist"] for r in z2_report["distortion"]["rows"]] == list(range(1, 7))


def test_report_tables(z2_report):
    rows = list(csv.DictReader(io.StringIO(report_tables(z2_report))))
    assert {r["table"] for r in rows} == {"gap", "dist"}
    fa = [r for r in rows if r["column"] == "fa_mass"]
    assert fa and fa[0]["value"] == str(z2_report["rows"][0]["fa"]["mass"])


def test_schema_rejects_broken_report(z2_report):
    bad = dict(z2_report)
    bad["rows"] = [dict(z2_report["rows"][0], fa={"status": "guess"})]
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)


def test_gap_config_validation():
    with pytest.raises(InputError):
        GapConfig(slog="x", Y="y", n_max=0).validate()
    with pytest.raises(InputError):
        gap_experiment(GapConfig(slog=DATA / "slog_z2.json", Y=DATA / "default_Y.json",
                                 x="q1"))
