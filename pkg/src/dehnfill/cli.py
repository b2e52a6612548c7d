"""Command-line entry point.

Every subcommand parses and validates its inputs, computes, and only then
writes output (JSON on stdout, or to ``--out``).  Exit codes: 0 success,
1 invariant violation, 2 input error, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .graphs import (
    FlagComplex2, InputError, Log, SimpleGraph, ThompsonComplexData, computable_checks_pass,
    dump_json, flag_completion, is_tree, load_json, verify_thompson_input,
)

OK, VIOLATION, INPUT_ERROR, BUDGET = 0, 1, 2, 3

BUDGET_ENV = "DEHNFILL_BUDGETS"
PROFILES = {
    "quick": {"n_max": 2, "tube_radius": 2, "area_budget": 20, "length_slack": 2,
              "max_states": 20_000, "dist_lmax": 8, "ball_budget": 50_000,
              "node_budget": 5_000},
    "default": {"n_max": 3, "tube_radius": 3, "area_budget": 40, "length_slack": 2,
                "max_states": 100_000, "dist_lmax": 12, "ball_budget": 200_000,
                "node_budget": 20_000},
    "thorough": {"n_max": 4, "tube_radius": 3, "area_budget": 60, "length_slack": 4,
                 "max_states": 1_000_000, "dist_lmax": 16, "ball_budget": 1_000_000,
                 "node_budget": 100_000},
}


class Budget(Exception):
    pass


# ------------------------------------------------------------ loading

def _read(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    try:
        return load_json(p)
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def _keyed(fn, path):
    try:
        return fn(_read(path))
    except (KeyError, TypeError) as e:
        raise InputError(f"{path}: malformed input ({e})") from None


def load_graph(path) -> SimpleGraph:
    return _keyed(lambda d: SimpleGraph(d["vertices"], d.get("edges", ())), path)


def load_slog(path) -> Log:
    return _keyed(Log.from_json, path)


def load_Y(path) -> ThompsonComplexData:
    return _keyed(ThompsonComplexData.from_json, path)


def load_fbc(path):
    from .groups import FreeByCyclic
    return _keyed(FreeByCyclic.from_json, path)


def _word(text):
    from .words import as_word
    try:
        return as_word(text)
    except ValueError as e:
        raise InputError(f"bad word {text!r}: {e}") from None


def _positive(args, *names):
    for n in names:
        v = getattr(args, n)
        if v is not None and v < 1:
            raise InputError(f"--{n.replace('_', '-')} must be positive")


def _group(args):
    """(presentation, oracle, label) from the mutually exclusive group flags."""
    from .groups import (
        DoubleOracle, d_presentation, log_presentation, raag_oracle, raag_presentation,
        slog_to_free_by_cyclic,
    )
    if args.graph:
        g = load_graph(args.graph)
        return raag_presentation(g), raag_oracle(g), "raag"
    if args.fbc:
        fbc = load_fbc(args.fbc)
        return d_presentation(fbc), DoubleOracle(fbc), "double"
    gamma = load_slog(args.slog)
    slog = slog_to_free_by_cyclic(gamma)
    if args.double:
        return d_presentation(slog.fbc), DoubleOracle(slog.fbc), "double"
    return log_presentation(gamma), slog.oracle(), "slog"


def _add_group(p, double=True):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph", help="graph JSON; the right-angled Artin group")
    g.add_argument("--slog", help="SLOG JSON; the SLOG group")
    g.add_argument("--fbc", help="free-by-cyclic JSON; its double over the fibre")
    if double:
        p.add_argument("--double", action="store_true",
                       help="with --slog: use the double of its free-by-cyclic form")


# ------------------------------------------------------------ commands

def cmd_check(args):
    from .complexes import amalgam_complex, check_slog_hypotheses, glued_ascending_link
    from .groups import DerivationBudgetExceeded, slog_to_free_by_cyclic

    gamma = load_slog(args.slog) if args.slog else None
    Y = load_Y(args.Y) if args.Y else None
    if gamma is None and Y is None:
        raise InputError("check needs --slog and/or --Y")
    reports, ok = [], True
    if gamma is not None:
        rep = check_slog_hypotheses(gamma)
        if rep.passed:
            try:
                slog = slog_to_free_by_cyclic(gamma)
                rep.add("free-by-cyclic form derived", True, f"rank {slog.fbc.rank}")
            except DerivationBudgetExceeded as e:
                raise Budget(str(e))
        reports.append(rep)
        ok &= rep.passed
    if Y is not None:
        rep = verify_thompson_input(Y)
        reports.append(rep)
        ok &= computable_checks_pass(rep)
    if ok and gamma is not None and Y is not None:
        am = amalgam_complex(gamma, Y, allow_unasserted=True)
        _, _, rep = glued_ascending_link(am)
        reports.append(rep)
        ok &= rep.passed
    for r in reports:
        print(r, file=sys.stderr)
    return {"passed": ok, "reports": [r.to_json() for r in reports]}, OK if ok else VIOLATION


def cmd_build(args):
    from .complexes import amalgam_complex, log_complex, salvetti
    if args.graph:
        cx = salvetti(load_graph(args.graph))
    elif args.Y:
        if not args.slog:
            raise InputError("--Y needs --slog")
        cx = amalgam_complex(load_slog(args.slog), load_Y(args.Y), allow_unasserted=True).complex
    else:
        cx = log_complex(load_slog(args.slog))
    return {"counts": cx.counts(), "complex": cx.to_json()}, OK


def cmd_link(args):
    from .complexes import amalgam_complex, link, log_complex, salvetti
    from .homology import h1_smith
    if args.graph:
        cx = salvetti(load_graph(args.graph))
    elif args.Y:
        cx = amalgam_complex(load_slog(args.slog), load_Y(args.Y), allow_unasserted=True).complex
    else:
        cx = log_complex(load_slog(args.slog))
    lk = link(cx)
    part = lk.ascending() if args.ascending else lk.descending() if args.descending else lk.complex
    g = lk.girth()
    return {"link": part.to_json(), "h1": h1_smith(part).to_json(),
            "is_tree": len(part.triangles) == 0 and is_tree(part.graph),
            "girth": g if isinstance(g, int) else str(g),
            "repeated_edges": [list(e) for e in lk.repeated_edges()]}, OK


def cmd_ball(args):
    _positive(args, "radius", "max_size")
    if args.level:
        return _level_ball(args)
    _, orc, label = _group(args)
    spheres = {}
    for d in orc.ball(args.radius, max_size=args.max_size).values():
        spheres[d] = spheres.get(d, 0) + 1
    return {"group": label, "radius": args.radius, "size": sum(spheres.values()),
            "spheres": [spheres.get(r, 0) for r in range(args.radius + 1)]}, OK


def _level_ball(args):
    from .complexes import log_complex, salvetti
    from .groups import raag_oracle, slog_to_free_by_cyclic
    from .homology import h1_smith
    from .levelset import diagonal_generators, level_ball
    if args.graph:
        g = load_graph(args.graph)
        cx, orc = salvetti(g), raag_oracle(g)
    elif args.slog and not args.double:
        gamma = load_slog(args.slog)
        cx, orc = log_complex(gamma), slog_to_free_by_cyclic(gamma).oracle()
    else:
        raise InputError("--level needs --graph or --slog")
    lc = level_ball(orc, diagonal_generators(cx), args.radius, cx, max_vertices=args.max_size)
    nv, ne, nf = len(lc.vertices), len(lc.edges), len(lc.faces)
    # a BFS ball is connected, so it is a tree iff it has nv - 1 edges
    return {"radius": args.radius, "vertices": nv, "edges": ne, "faces": nf,
            "is_tree": nf == 0 and ne == nv - 1, "h1": h1_smith(lc).to_json()}, OK


def cmd_fa(args):
    from .fillings.delta import cayley_ball, cayley_region, loop_vertices, word_cycle
    from .homology import EXACT, Chain, fa_fill
    _positive(args, "node_budget")
    pres, orc, label = _group(args)
    if args.cycle is not None:
        # cell ids refer to the ball of the given radius about the identity
        if args.radius is None:
            raise InputError("--cycle needs --radius")
        _positive(args, "radius")
        cx = cayley_ball(pres, orc, args.radius)
        data = _read(args.cycle)
        try:
            z = Chain.from_json(cx, data)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad chain in {args.cycle}: {e}") from None
        if z.dim != 1 or not z.boundary().is_zero():
            raise InputError("--cycle must be a 1-cycle")
        where = {"radius": args.radius}
    else:
        if args.word is None:
            raise InputError("give --word or --cycle")
        w = _word(args.word)
        if not orc.is_trivial(w):
            raise InputError("word is not trivial in the group")
        if args.radius is not None:
            _positive(args, "radius")
            cx = cayley_ball(pres, orc, args.radius)
            where = {"radius": args.radius}
        else:
            _positive(args, "tube")
            cx = cayley_region(pres, orc, loop_vertices(orc, w), args.tube)
            where = {"tube": args.tube}
        try:
            z = word_cycle(cx, orc, w)
        except KeyError:
            raise InputError("the loop leaves the ball; raise --radius") from None
    res = fa_fill(cx, z, node_budget=args.node_budget)
    out = dict(res.to_json(timing=args.timing, chain=args.chain), group=label,
               faces=len(cx.faces), **where)
    return out, OK if res.status == EXACT else BUDGET


def cmd_delta(args):
    from .fillings.delta import EXACT, delta_fill
    _positive(args, "area_budget", "length_budget", "max_states")
    pres, orc, label = _group(args)
    w = _word(args.word)
    if not orc.is_trivial(w):
        raise InputError("word is not trivial in the group")
    res = delta_fill(pres, w, area_budget=args.area_budget, length_budget=args.length_budget,
                     oracle=orc, max_states=args.max_states)
    out = dict(res.to_json(timing=args.timing, certificate=args.certificate), group=label)
    return out, OK if res.status == EXACT else BUDGET


def cmd_distortion(args):
    from .fillings.distortion import distortion
    from .fillings.growth import growth_fit
    from .groups import slog_to_free_by_cyclic
    _positive(args, "lmax", "ball_budget")
    fbc = load_fbc(args.fbc) if args.fbc else slog_to_free_by_cyclic(load_slog(args.slog)).fbc
    table = distortion(fbc, args.lmax, ball_budget=args.ball_budget)
    out = table.to_json()
    try:
        out["fit"] = growth_fit(table.as_dict()).to_json()
    except ValueError:
        out["fit"] = None
    ok = table.verify(fbc)
    out["verified"] = ok
    return out, OK if ok else VIOLATION


def cmd_homology(args):
    from .complexes import amalgam_complex, glued_ascending_link
    from .homology import h1_smith
    if args.slog:
        if not args.Y:
            raise InputError("--slog needs --Y (glued ascending link)")
        am = amalgam_complex(load_slog(args.slog), load_Y(args.Y), allow_unasserted=True)
        alk, h1, rep = glued_ascending_link(am)
        return {"object": "glued ascending link", "h1": h1.to_json(),
                "checks": rep.to_json()}, OK
    if args.Y:
        cx, what = load_Y(args.Y).complex, "Y"
    elif args.graph:
        cx, what = flag_completion(load_graph(args.graph)), "flag completion"
    elif args.complex:
        cx, what = _keyed(FlagComplex2.from_json, args.complex), "flag complex"
    else:
        raise InputError("homology needs --Y, --graph, --complex or --slog with --Y")
    return {"object": what, "h1": h1_smith(cx).to_json()}, OK


def _gap_budgets(args):
    name = args.budgets or os.environ.get(BUDGET_ENV) or "default"
    if name in PROFILES:
        budgets = dict(PROFILES[name])
    else:
        budgets = _read(name)
        unknown = set(budgets) - set(PROFILES["default"])
        if unknown:
            raise InputError(f"unknown budget keys: {', '.join(sorted(unknown))}")
        budgets = dict(PROFILES["default"], **budgets)
    if args.nmax is not None:
        budgets["n_max"] = args.nmax
    for k, v in budgets.items():
        if not isinstance(v, int) or isinstance(v, bool):
            raise InputError(f"budget {k} must be an integer")
    return budgets


def cmd_gap(args):
    from .fillings.experiments import GapConfig, gap_experiment, report_tables, validate_report
    cfg = GapConfig(slog=load_slog(args.slog), Y=load_Y(args.Y), x=args.x,
                    constructive=not args.no_constructive, timing=args.timing,
                    **_gap_budgets(args))
    cfg.validate()
    out = Path(args.out or ".")
    if out.exists() and not out.is_dir():
        raise InputError(f"{out} is not a directory")
    report = gap_experiment(cfg)
    validate_report(report)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(report, out / "report.json")
    (out / "tables.csv").write_text(report_tables(report))
    summary = {"report": str(out / "report.json"), "tables": str(out / "tables.csv"),
               "checks": report["checks"]}
    return summary, OK if report["checks"]["passed"] else VIOLATION


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dehnfill", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="output file (directory for gap); default stdout")
        p.add_argument("--no-timing", dest="timing", action="store_false",
                       help="omit timing fields so output is byte-identical across runs")
        return p

    p = cmd("check", cmd_check, "validate a SLOG and/or a marked flag complex")
    p.add_argument("--slog")
    p.add_argument("--Y")

    for name, fn, help in (("build", cmd_build, "dump a cube complex"),
                           ("link", cmd_link, "vertex link of a cube complex")):
        p = cmd(name, fn, help)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--graph", help="Salvetti complex of this graph")
        g.add_argument("--slog", help="LOG complex, or the amalgam with --Y")
        p.add_argument("--Y", help="marked flag complex for the amalgam")
        if name == "link":
            side = p.add_mutually_exclusive_group()
            side.add_argument("--ascending", action="store_true")
            side.add_argument("--descending", action="store_true")

    p = cmd("ball", cmd_ball, "word-metric ball, or level-set ball with --level")
    _add_group(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--max-size", type=int, default=500_000)
    p.add_argument("--level", action="store_true",
                   help="ball in the level set of the height map")

    p = cmd("fa", cmd_fa, "filling area of a loop in a piece of the Cayley complex")
    _add_group(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--word")
    src.add_argument("--cycle", help="1-chain JSON {dim, coeffs} on the --radius ball")
    p.add_argument("--tube", type=int, default=2, help="tube radius about the loop")
    p.add_argument("--radius", type=int, help="use the ball about the identity instead")
    p.add_argument("--chain", action="store_true", help="include the minimal chain")
    p.add_argument("--node-budget", type=int, default=20_000)

    p = cmd("delta", cmd_delta, "least-area van Kampen diagram")
    _add_group(p)
    p.add_argument("--word", required=True)
    p.add_argument("--area-budget", type=int, default=30)
    p.add_argument("--length-budget", type=int, default=30)
    p.add_argument("--max-states", type=int, default=2_000_000)
    p.add_argument("--certificate", action="store_true", help="include the rewriting steps")

    p = cmd("distortion", cmd_distortion, "fibre distortion table")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--fbc")
    g.add_argument("--slog")
    p.add_argument("--lmax", type=int, default=12)
    p.add_argument("--ball-budget", type=int, default=400_000)

    p = cmd("homology", cmd_homology, "first homology")
    p.add_argument("--Y")
    p.add_argument("--graph")
    p.add_argument("--complex", help="flag complex JSON")
    p.add_argument("--slog", help="with --Y: glued ascending link of the amalgam")

    p = cmd("gap", cmd_gap, "hard-curve experiment; writes report.json and tables.csv")
    p.add_argument("--slog", required=True)
    p.add_argument("--Y", required=True)
    p.add_argument("--nmax", type=int)
    p.add_argument("--budgets", help=f"profile ({', '.join(PROFILES)}) or JSON file; "
                                     f"default from ${BUDGET_ENV}")
    p.add_argument("--x", default="x1", help="fibre word in the hard curve")
    p.add_argument("--no-constructive", action="store_true")
    return ap


def main(argv=None) -> int:
    from .groups import BudgetExceeded, DerivationBudgetExceeded
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "out", None) and args.command != "gap":
            parent = Path(args.out).parent
            if not parent.is_dir():
                raise InputError(f"output directory {parent} does not exist")
        result, code = args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except (Budget, BudgetExceeded, DerivationBudgetExceeded) as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return BUDGET
    if args.command != "gap" and args.out:
        dump_json(result, args.out)
    else:
        print(dump_json(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
