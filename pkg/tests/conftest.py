from pathlib import Path

import pytest

from dehnfill.graphs import Log, SimpleGraph, ThompsonComplexData, load_json

DATA = Path(__file__).resolve().parents[1] / "src" / "dehnfill" / "data"


def data_path(name):
    return DATA / name


def load_log(name):
    return Log.from_json(load_json(DATA / name))


@pytest.fixture(scope="session")
def z2_slog():
    return load_log("slog_z2.json")


@pytest.fixture(scope="session")
def exp_slog():
    return load_log("slog_exp.json")


@pytest.fixture(scope="session")
def at_slog():
    return load_log("slog_at.json")


@pytest.fixture(scope="session")
def default_Y():
    return ThompsonComplexData.from_json(load_json(DATA / "default_Y.json"))


def graph(edges, vertices=None):
    vs = set(vertices or ())
    for a, b in edges:
        vs |= {a, b}
    return SimpleGraph(sorted(vs), edges)


K2 = graph([("a", "b")])
K3 = graph([("a", "b"), ("b", "c"), ("a", "c")])
K4 = graph([(x, y) for i, x in enumerate("abcd") for y in "abcd"[i + 1:]])
C4 = graph([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


# one line per acceptance criterion, printed after the run
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[k])
