"""Command-line interface.

Subcommands: rollout, bound, oracle, sweep, repro, serve.
Exit codes: 0 success, 2 bound-soundness violation, 1 any other error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bounds import NormGridSpec, performance_bound
from .controller import Strategy, make_law
from .oracle import DpGrid, dp_query, dp_solve
from .problem import reachable_radius
from .registry import available_problems, get_suite
from .repro import FIGURES, SoundnessViolationError, reproduce_figure
from .simulate import rollout_closed_loop
from .sweep import (resolve_worst_case_value, run_sweep,
                    soundness_violations, write_sweep_csv,
                    write_trajectory_csv)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SOUNDNESS = 2


def _add_common_vf_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", required=True, choices=available_problems())
    p.add_argument("--vf", required=True,
                   help="VF family name (e.g. vstar, v1, v2, veps)")
    p.add_argument("--eps", type=float, default=1.0,
                   help="family parameter (ignored by vstar)")
    p.add_argument("--x0", type=float, nargs="+", default=None,
                   help="initial state (defaults to the suite's x0)")


def _cmd_rollout(args) -> int:
    suite = get_suite(args.problem)
    x0 = np.asarray(args.x0 if args.x0 is not None else suite.default_x0,
                    dtype=float)
    J = suite.candidate(args.vf, args.eps)
    strategy = Strategy(args.argmin) if args.argmin else None
    law = make_law(suite.problem, J, strategy=strategy,
                   grid_points_per_axis=args.argmin_grid)
    vstar_value = suite.vstar.value_at(x0, 0.0)
    result = rollout_closed_loop(suite.problem, law, x0, args.steps,
                                 vstar_value=vstar_value)
    report = performance_bound(
        suite.problem, J, suite.vstar, x0,
        worst_case_value=resolve_worst_case_value(suite, x0))
    payload = {
        "problem": args.problem,
        "vf": args.vf,
        "eps": args.eps,
        "x0": x0.tolist(),
        "steps": args.steps,
        "total_cost": result.total_cost,
        "loss": result.loss,
        "vstar_at_origin_point": result.vstar_at_origin_point,
        "terminal_state": result.trajectory.states[-1].tolist(),
        "max_state_norm": result.trajectory.max_state_norm,
        "bound": report.to_dict(),
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2))
    else:
        print(json.dumps(payload, indent=2))
    if args.traj:
        write_trajectory_csv(result.trajectory, args.traj)
    for msg in report.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    return EXIT_OK


def _cmd_bound(args) -> int:
    suite = get_suite(args.problem)
    x0 = np.asarray(args.x0 if args.x0 is not None else suite.default_x0,
                    dtype=float)
    J = suite.candidate(args.vf, args.eps)
    grid = NormGridSpec(state_points_per_axis=args.grid_x,
                        time_points=args.grid_t)
    report = performance_bound(
        suite.problem, J, suite.vstar, x0, grid=grid,
        worst_case_value=resolve_worst_case_value(suite, x0))
    payload = report.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2))
    else:
        print(json.dumps(payload, indent=2))
    for msg in report.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    suite = get_suite(args.problem)
    x0 = float(args.x0)
    R = reachable_radius([x0], suite.problem.constants.beta_f,
                         suite.problem.horizon)
    half = args.x_max if args.x_max is not None else max(1.0, 1.1 * R)
    x_min = args.x_min if args.x_min is not None else -half
    grid = DpGrid(x_min=x_min, x_max=half, nx=args.nx, nt=args.nt,
                  mode=args.mode)
    dp_solve(suite.problem, grid)
    value = dp_query(grid, x0, 0.0)
    print(f"{args.problem} {args.mode}-mode value at (x0={x0:g}, t=0): {value!r}")
    if args.compare:
        analytic = None
        if args.mode == "inf":
            analytic = suite.vstar.value_at(np.array([x0]), 0.0)
        elif suite.worst_case_vf is not None:
            analytic = suite.worst_case_vf.value_at(np.array([x0]), 0.0)
        if analytic is None:
            print("no analytic value available for comparison")
        else:
            print(f"analytic: {analytic!r}  abs error: {abs(value - analytic):.3e}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    suite = get_suite(args.problem)
    eps_list = args.eps_list or suite.default_eps.get(args.family)
    if not eps_list:
        print(f"no eps list given and no default for family {args.family!r}",
              file=sys.stderr)
        return EXIT_ERROR
    records = run_sweep(suite, args.family, eps_list,
                        x0=args.x0, steps=args.steps)
    write_sweep_csv(records, args.out)
    failed = [r for r in records if r.error]
    for r in failed:
        print(f"record eps={r.eps:g} failed: {r.error}", file=sys.stderr)
    violations = soundness_violations(records)
    for v in violations:
        print(f"soundness violation: {v}", file=sys.stderr)
    if violations:
        return EXIT_SOUNDNESS
    return EXIT_ERROR if failed else EXIT_OK


def _cmd_repro(args) -> int:
    figures = FIGURES if args.figure == "all" else (args.figure,)
    try:
        for fig in figures:
            written = reproduce_figure(fig, args.out, steps=args.steps)
            for path in written:
                print(f"wrote {path}")
    except SoundnessViolationError as exc:
        print(f"soundness violation: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hjbgap",
        description="Controller synthesis from approximate value functions "
                    "with Sobolev-norm suboptimality bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rollout", help="closed-loop simulation")
    _add_common_vf_args(p)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--out", help="result JSON path (stdout if omitted)")
    p.add_argument("--traj", help="optional trajectory CSV path")
    p.add_argument("--argmin", choices=[s.value for s in Strategy],
                   help="argmin strategy override")
    p.add_argument("--argmin-grid", type=int, default=None,
                   help="grid points per input axis for the grid strategy")
    p.set_defaults(func=_cmd_rollout)

    p = sub.add_parser("bound", help="performance-bound report")
    _add_common_vf_args(p)
    p.add_argument("--grid-x", type=int, default=4001)
    p.add_argument("--grid-t", type=int, default=5)
    p.add_argument("--out", help="report JSON path (stdout if omitted)")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("oracle", help="backward-DP verification oracle")
    p.add_argument("--problem", required=True, choices=available_problems())
    p.add_argument("--mode", choices=["inf", "sup"], default="inf")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--nx", type=int, default=2001)
    p.add_argument("--nt", type=int, default=2001)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--compare", action="store_true",
                   help="also print the analytic value and absolute error")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("sweep", help="epsilon sweep to CSV")
    p.add_argument("--problem", required=True, choices=available_problems())
    p.add_argument("--family", required=True)
    p.add_argument("--eps-list", type=float, nargs="+", default=None)
    p.add_argument("--x0", type=float, nargs="+", default=None)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("repro", help="emit the figure reproduction CSVs")
    p.add_argument("--figure", choices=list(FIGURES) + ["all"], required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--steps", type=int, default=10_000)
    p.set_defaults(func=_cmd_repro)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SoundnessViolationError as exc:
        print(f"soundness violation: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
