"""dirichlet-lab command line."""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import dirichlet_core as dc
from .dsl import DSLError
from .experiments import (
    CHECKS,
    SCHEMA_VERSION,
    ScenarioError,
    csv_text,
    dumps_json,
    load_scenario,
    run_scenario,
    scenario_from_dict,
)
from .quadrature import DEFAULT_CONFIG, QuadratureError

# subcommand -> scenario check name
SUBCOMMANDS = {
    "coeffs": "coeffs",
    "partial-sum": "partial-sum",
    "converge": "converge",
    "lebesgue-check": "lebesgue",
    "bound-check": "bound",
    "k-check": "k",
    "class-e-check": "class-e",
    "run": None,
    "kernel": None,
}

# file printed to stdout when --out is omitted
PRIMARY_OUTPUT = {
    "coeffs": "coeffs_j0.csv",
    "partial-sum": "partial_sum.csv",
    "converge": "converge.csv",
    "lebesgue": "lebesgue.json",
    "bound": "bound.csv",
    "k": "k.csv",
    "class-e": "class_e.csv",
}


def _add_common(p):
    p.add_argument("--scenario", help="scenario JSON file")
    p.add_argument("--out", help="output directory (default: print the main table to stdout)")
    p.add_argument("--strict", action="store_true", help="consistency flags also decide the exit status")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    q = p.add_argument_group("quadrature")
    q.add_argument("--quad-nodes", type=int, dest="nodes_per_panel")
    q.add_argument("--quad-panels-per-osc", type=int, dest="min_panels_per_oscillation")
    q.add_argument("--quad-abs-tol", type=float, dest="abs_tol")
    q.add_argument("--quad-rel-tol", type=float, dest="rel_tol")
    i = p.add_argument_group("inline scenario (used without --scenario)")
    i.add_argument("--function", "-f", help="function in the expression DSL")
    i.add_argument("--period", type=float, help="declared period of f")
    i.add_argument("--support", type=float, nargs=2, metavar=("A", "B"), help="declared support of f")
    i.add_argument("--x", type=float, action="append", help="evaluation point (repeatable)")
    i.add_argument("--l", type=float, help="half-length of the interval")
    i.add_argument("--n", type=int, help="partial-sum order")
    i.add_argument("--l0", type=float, help="first l of a power sweep l_j = l0 * 2^j, n_j = ceil(l_j^p)")
    i.add_argument("--steps", type=int, default=4)
    i.add_argument("--exponent", type=float, default=2.0)
    i.add_argument("--threshold", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dirichlet-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        _add_common(p)
        if name == "kernel":
            p.add_argument("--t-count", type=int, default=201, help="number of t samples over [-l, l]")
    return parser


def _quad_overrides(args):
    keys = ("nodes_per_panel", "min_panels_per_oscillation", "abs_tol", "rel_tol")
    return {k: getattr(args, k) for k in keys if getattr(args, k) is not None}


def _inline_scenario(args, check):
    if not args.function:
        raise ScenarioError("function", "give --scenario or --function")
    raw = {"schema_version": SCHEMA_VERSION, "name": "inline", "function": args.function, "checks": [check]}
    if args.period is not None:
        raw["period_hint"] = args.period
    if args.support is not None:
        raw["support_hint"] = list(args.support)
    if args.l0 is not None:
        raw["sweep"] = {"rule": "power", "l0": args.l0, "ratio": 2, "steps": args.steps, "exponent": args.exponent}
    elif args.l is not None and args.n is not None:
        raw["sweep"] = [{"n": args.n, "l": args.l}]
    raw["x_points"] = args.x if args.x else [0.0]
    if args.threshold is not None:
        raw["threshold"] = args.threshold
    if args.seed is not None:
        raw["seed"] = args.seed
    return raw


def _kernel(args):
    if args.l is None or args.n is None:
        raise ScenarioError("", "kernel needs --l and --n")
    grid = dc.GridParams(args.l, args.n)
    cfg = DEFAULT_CONFIG.with_overrides(**_quad_overrides(args))
    t = np.linspace(-grid.l, grid.l, args.t_count)
    text = csv_text(("t", "D"), list(zip(t, dc.kernel(grid, t, cfg))))
    if args.out:
        from pathlib import Path

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "kernel.csv").write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "kernel":
            return _kernel(args)
        check = SUBCOMMANDS[args.command]
        if args.scenario:
            sc = load_scenario(args.scenario, args.seed, _quad_overrides(args))
            if check is not None:
                sc = sc.__class__(**{**sc.__dict__, "checks": (check,)})
        else:
            if check is None:
                raise ScenarioError("", "run needs --scenario")
            sc = scenario_from_dict(_inline_scenario(args, check), args.seed, _quad_overrides(args))
        result = run_scenario(sc, args.out, strict=args.strict, jobs=args.jobs)
    except (ScenarioError, DSLError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return 3
    if args.out is None:
        if check is not None:
            sys.stdout.write(result.outcomes[check].files[PRIMARY_OUTPUT[check]])
        else:
            sys.stdout.write(dumps_json(result.summary))
    for name, outcome in result.outcomes.items():
        for failure in outcome.failures:
            print(f"FAIL [{name}] {failure}", file=sys.stderr)
    return result.exit_status


if __name__ == "__main__":
    sys.exit(main())
