import json
import subprocess
import sys

import pytest

from dehnfill.cli import BUDGET, INPUT_ERROR, OK, VIOLATION, main
from dehnfill.fillings.experiments import validate_report

from conftest import DATA

SLOG_Z2 = str(DATA / "slog_z2.json")
Y = str(DATA / "default_Y.json")


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def z2_graph(tmp_path):
    return write(tmp_path, "k2.json", {"vertices": ["a", "b"], "edges": [["a", "b"]]})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_check_ok(capsys):
    code, _ = run(capsys, "check", "--slog", SLOG_Z2)
    assert code == OK


def test_check_violation(capsys, tmp_path):
    c4 = write(tmp_path, "c4.json", {"vertices": list("abcd"),
                                     "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]],
                                     "triangles": [], "marked": list("abcd")})
    code, _ = run(capsys, "check", "--Y", c4)
    assert code == VIOLATION


def test_missing_file(capsys, tmp_path):
    code, _ = run(capsys, "check", "--slog", str(tmp_path / "nope.json"))
    assert code == INPUT_ERROR


def test_malformed_input(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", {"vertices": ["a"], "edges": [["a", "z"]]})
    code, _ = run(capsys, "fa", "--graph", bad, "--word", "a")
    assert code == INPUT_ERROR


def test_bad_word(capsys, z2_graph):
    code, _ = run(capsys, "delta", "--graph", z2_graph, "--word", "a q")
    assert code == INPUT_ERROR


def test_fa_unit_square(capsys, z2_graph):
    code, out = run(capsys, "fa", "--graph", z2_graph, "--word", "a b a^-1 b^-1")
    assert code == OK
    assert out["status"] == "exact" and out["mass"] == 1


def test_delta_with_certificate(capsys, z2_graph):
    code, out = run(capsys, "delta", "--graph", z2_graph, "--word", "a a b a^-1 a^-1 b^-1",
                    "--certificate")
    assert code == OK
    assert out["status"] == "exact" and out["area"] == 2 and out["certificate"]


def test_delta_budget(capsys, z2_graph):
    code, _ = run(capsys, "delta", "--graph", z2_graph, "--word",
                  "a a a b b b a^-1 a^-1 a^-1 b^-1 b^-1 b^-1", "--max-states", "5")
    assert code == BUDGET


def test_ball_budget(capsys, z2_graph):
    code, _ = run(capsys, "ball", "--graph", z2_graph, "--radius", "30", "--max-size", "50")
    assert code == BUDGET


def test_level_ball(capsys):
    code, out = run(capsys, "ball", "--slog", SLOG_Z2, "--radius", "8", "--level")
    assert code == OK
    assert out["is_tree"] and out["vertices"] == 17


def test_distortion_identity(capsys, tmp_path):
    f = write(tmp_path, "id.json", {"basis": ["x1"], "phi": {"x1": "x1"}})
    code, out = run(capsys, "distortion", "--fbc", f, "--lmax", "5")
    assert code == OK and out["verified"]
    assert [r["dist"] for r in out["rows"]] == [1, 2, 3, 4, 5]


def test_homology(capsys):
    code, out = run(capsys, "homology", "--Y", Y)
    assert code == OK and out["h1"]["rank"] == 0 and out["h1"]["torsion"] == []


def test_build_and_link(capsys, z2_graph):
    code, out = run(capsys, "build", "--graph", z2_graph)
    assert code == OK
    code, out = run(capsys, "link", "--graph", z2_graph, "--ascending")
    assert code == OK


def test_out_file(capsys, tmp_path, z2_graph):
    dest = tmp_path / "fa.json"
    code, out = run(capsys, "fa", "--graph", z2_graph, "--word", "a b a^-1 b^-1",
                    "--out", str(dest))
    assert code == OK and out is None
    assert json.loads(dest.read_text())["mass"] == 1


def test_out_dir_missing(capsys, tmp_path, z2_graph):
    code, _ = run(capsys, "fa", "--graph", z2_graph, "--word", "a b a^-1 b^-1",
                  "--out", str(tmp_path / "no" / "fa.json"))
    assert code == INPUT_ERROR


def gap(capsys, out_dir, *extra):
    return run(capsys, "gap", "--slog", SLOG_Z2, "--Y", Y, "--nmax", "1",
               "--budgets", "quick", "--out", str(out_dir), *extra)


def test_gap_report(capsys, tmp_path):
    code, summary = gap(capsys, tmp_path / "r")
    assert code == OK and summary["checks"]["passed"]
    report = json.loads((tmp_path / "r" / "report.json").read_text())
    validate_report(report)
    assert (tmp_path / "r" / "tables.csv").read_text().startswith("table,index,column,value")


def test_gap_no_timing_byte_identical(capsys, tmp_path):
    gap(capsys, tmp_path / "a", "--no-timing")
    gap(capsys, tmp_path / "b", "--no-timing")
    for f in ("report.json", "tables.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    assert "seconds" not in (tmp_path / "a" / "report.json").read_text()


def test_gap_invalid_input_writes_nothing(capsys, tmp_path):
    out = tmp_path / "r"
    bad = write(tmp_path, "b.json", {"max_states": 0})
    assert gap(capsys, out, "--budgets", bad)[0] == INPUT_ERROR
    bad = write(tmp_path, "b2.json", {"bogus": 1})
    assert gap(capsys, out, "--budgets", bad)[0] == INPUT_ERROR
    assert gap(capsys, out, "--x", "y7")[0] == INPUT_ERROR
    assert not out.exists()


def test_budget_env(tmp_path):
    # profile name from the environment; a bad name is an input error
    env = {"DEHNFILL_BUDGETS": "nonexistent-profile", "PATH": ""}
    proc = subprocess.run([sys.executable, "-m", "dehnfill.cli", "gap", "--slog", SLOG_Z2,
                           "--Y", Y, "--out", str(tmp_path / "r")],
                          env=env, capture_output=True, text=True)
    assert proc.returncode == INPUT_ERROR
    assert not (tmp_path / "r").exists()


def test_fa_cycle_file(capsys, tmp_path, z2_graph):
    from dehnfill.fillings.delta import cayley_ball, word_cycle
    from dehnfill.groups import raag_oracle, raag_presentation
    from dehnfill.words import as_word

    from conftest import K2
    cx = cayley_ball(raag_presentation(K2), raag_oracle(K2), 3)
    z = word_cycle(cx, raag_oracle(K2), as_word("a a b a^-1 a^-1 b^-1"))
    cyc = write(tmp_path, "cyc.json", z.to_json())
    code, out = run(capsys, "fa", "--graph", z2_graph, "--cycle", cyc, "--radius", "3", "--chain")
    assert code == OK and out["mass"] == 2
    assert out["chain"]["dim"] == 2 and sorted(map(abs, out["chain"]["coeffs"].values())) == [1, 1]
    # half of the loop is not a cycle
    half = dict(z.to_json(), coeffs=dict(list(z.to_json()["coeffs"].items())[:3]))
    code, _ = run(capsys, "fa", "--graph", z2_graph, "--cycle", write(tmp_path, "h.json", half),
                  "--radius", "3")
    assert code == INPUT_ERROR
    code, _ = run(capsys, "fa", "--graph", z2_graph, "--cycle", cyc)
    assert code == INPUT_ERROR


def test_fa_loop_outside_ball(capsys, z2_graph):
    code, _ = run(capsys, "fa", "--graph", z2_graph, "--word", "a a a b a^-1 a^-1 a^-1 b^-1",
                  "--radius", "1")
    assert code == INPUT_ERROR
