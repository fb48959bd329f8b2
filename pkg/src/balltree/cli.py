"""Command line: ``balltree plan | bench | render | list``.

Exit codes: 0 solved or completed, 2 unsolved within budget, 3 invalid
input, 4 unsupported capability.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import emit_results, format_table, run_trials, summarize
from .cspace import InvalidArgument
from .environments import Unsupported
from .planners import Variant, plan
from .render import render_svg
from .scenario import bundled_names, load_scenario
from .tree import BallTree

EXIT_OK, EXIT_UNSOLVED, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 2, 3, 4

PARAM_FLAGS = (
    ("--r0", float, "initial ball radius"),
    ("--delta", float, "trim slack and radius floor"),
    ("--resolution", float, "collision probe spacing"),
    ("--rrt-step", float, "RRT-Connect step cap"),
    ("--max-iter", int, "sample budget"),
    ("--time-budget", float, "wall-clock budget in seconds"),
    ("--metric", str, "L2 or Linf"),
)


def _overrides(args) -> dict:
    return {
        "r0": args.r0,
        "delta": args.delta,
        "resolution": args.resolution,
        "rrt_step": args.rrt_step,
        "max_iterations": args.max_iter,
        "time_budget": args.time_budget,
        "metric": args.metric,
    }


def _add_param_flags(p):
    g = p.add_argument_group("planner parameters (override the scenario)")
    for flag, typ, help_ in PARAM_FLAGS:
        g.add_argument(flag, type=typ, default=None, help=help_)


def tree_dump(scenario, variant: Variant, seed: int, result) -> dict:
    return {
        "version": 1,
        "scenario": scenario.name,
        "variant": variant.value,
        "seed": seed,
        "outcome": result.outcome.value,
        "path": [q.tolist() for q in result.path] if result.path is not None else None,
        "trees": [t.to_dict() for t in result.trees],
    }


def cmd_plan(args) -> int:
    sc = load_scenario(args.scenario)
    variant = Variant.parse(args.variant)
    params = sc.planner_params(variant, seed=args.seed, **_overrides(args))
    result = plan(sc.env, sc.start, sc.goal, params)
    summary = {"scenario": sc.name, "variant": variant.value, "seed": args.seed, **result.counters(),
               "total_nodes": result.total_nodes, "wall_time_s": result.wall_time}
    print(json.dumps(summary))
    if args.svg:
        Path(args.svg).write_text(render_svg(sc, result.trees, result.path), encoding="utf-8")
    if args.dump_tree:
        Path(args.dump_tree).write_text(json.dumps(tree_dump(sc, variant, args.seed, result)) + "\n", encoding="utf-8")
    return EXIT_OK if result.solved else EXIT_UNSOLVED


def cmd_bench(args) -> int:
    variants = [Variant.parse(v) for v in args.variants.split(",") if v.strip()]
    if not variants:
        raise InvalidArgument("--variants is empty")
    rows = []
    for path in args.scenarios:
        sc = load_scenario(path)
        for v in variants:
            records = run_trials(sc, v, args.trials, args.base_seed, **_overrides(args))
            rows.append(summarize(records, sc.name, v.value))
    if args.out:
        emit_results(rows, args.out, args.format, timing=not args.no_timing)
    if not args.quiet:
        print(format_table(rows))
    return EXIT_OK


def cmd_render(args) -> int:
    sc = load_scenario(args.scenario)
    try:
        dump = json.loads(Path(args.dump).read_text(encoding="utf-8"))
        trees = [BallTree.from_dict(t) for t in dump["trees"]]
        path = dump.get("path")
    except (OSError, ValueError, KeyError, TypeError, IndexError) as e:
        raise InvalidArgument(f"{args.dump}: not a tree dump ({e})") from None
    Path(args.out).write_text(render_svg(sc, trees, path), encoding="utf-8")
    return EXIT_OK


def cmd_list(args) -> int:
    for name in bundled_names():
        sc = load_scenario(name)
        print(f"{name:10s} {sc.env.kind:16s} N={sc.dim:<3d} {sc.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="balltree", description="Ball-tree motion planners and benchmarks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve one scenario once")
    p.add_argument("scenario", help="scenario file or bundled scenario name")
    p.add_argument("--variant", default="inexact", help="rrt, exact or inexact")
    p.add_argument("--seed", type=int, default=0)
    _add_param_flags(p)
    p.add_argument("--svg", metavar="OUT", help="write an SVG figure")
    p.add_argument("--dump-tree", metavar="OUT", help="write trees and path as JSON")
    p.set_defaults(func=cmd_plan)

    b = sub.add_parser("bench", help="seeded multi-trial statistics")
    b.add_argument("scenarios", nargs="+", help="scenario files or bundled names")
    b.add_argument("--variants", default="rrt,inexact", help="comma-separated variants")
    b.add_argument("--trials", type=int, default=30)
    b.add_argument("--base-seed", type=int, default=0)
    b.add_argument("--out", help="results file")
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("--no-timing", action="store_true",
                   help="leave the wall-time columns empty so reruns are byte-identical")
    b.add_argument("--quiet", action="store_true", help="do not print the table")
    _add_param_flags(b)
    b.set_defaults(func=cmd_bench)

    r = sub.add_parser("render", help="draw a tree dump over its scenario")
    r.add_argument("dump", help="JSON written by plan --dump-tree")
    r.add_argument("scenario")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)

    ls = sub.add_parser("list", help="list bundled scenarios")
    ls.set_defaults(func=cmd_list)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Unsupported as e:
        print(f"balltree: unsupported: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InvalidArgument, OSError) as e:
        print(f"balltree: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
