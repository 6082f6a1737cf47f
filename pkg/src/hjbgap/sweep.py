"""Epsilon sweeps pairing simulated loss with theoretical bounds, and the
CSV emission behind the reproduction figures."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .bounds import NormGridSpec, performance_bound
from .controller import make_law
from .oracle import DpGrid, dp_query, dp_solve
from .problem import reachable_radius
from .registry import ExampleSuite
from .simulate import RolloutResult, Trajectory, rollout_closed_loop

SWEEP_CSV_HEADER = ["eps", "loss_numeric", "bound_formula", "bound_grid",
                    "norm_estimate", "steps", "runtime_ms"]

# Grid-size ceiling for per-record norm estimates inside sweeps.  Dedicated
# high-resolution runs (the oscillation acceptance check) pass their own
# NormGridSpec instead.
MAX_SWEEP_STATE_POINTS = 4_000_001
DEFAULT_STATE_POINTS = 4001
DEFAULT_TIME_POINTS = 5


@dataclass
class SweepRecord:
    eps: float
    loss_numeric: float
    bound_formula: float
    bound_grid: float
    norm_estimate: float
    steps: int
    runtime_ms: float
    error: Optional[str] = None
    max_state_norm: float = math.nan  # not serialized; Gronwall containment check

    def row(self) -> list:
        return [self.eps, self.loss_numeric, self.bound_formula,
                self.bound_grid, self.norm_estimate, self.steps,
                self.runtime_ms]


def family_norm_grid(suite: ExampleSuite, family: str, eps_list, x0) -> NormGridSpec:
    """One NormGridSpec per family, sized by the family's worst (smallest)
    oscillation wavelength across the sweep, capped for sweep-scale cost."""
    R = reachable_radius(x0, suite.problem.constants.beta_f,
                         suite.problem.horizon)
    points = DEFAULT_STATE_POINTS
    for eps in eps_list:
        vf = suite.candidate(family, eps)
        if vf.oscillation_wavelength:
            needed = int(math.ceil(20.0 * 2.0 * R / vf.oscillation_wavelength))
            points = max(points, needed)
    return NormGridSpec(state_points_per_axis=min(points, MAX_SWEEP_STATE_POINTS),
                        time_points=DEFAULT_TIME_POINTS, offset=True)


def resolve_worst_case_value(suite: ExampleSuite, x0,
                             dp_nx: int = 2001, dp_nt: int = 2001) -> Optional[float]:
    """Worst-case value at (x0, 0): analytic when the suite carries one,
    otherwise a sup-mode DP solve over a domain covering the Gronwall ball."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if suite.worst_case_vf is not None:
        return suite.worst_case_vf.value_at(x0, 0.0)
    if suite.problem.n != 1:
        return None
    R = reachable_radius(x0, suite.problem.constants.beta_f,
                         suite.problem.horizon)
    half = max(1.0, 1.1 * R)
    grid = DpGrid(x_min=-half, x_max=half, nx=dp_nx, nt=dp_nt, mode="sup")
    dp_solve(suite.problem, grid)
    return dp_query(grid, float(x0[0]), 0.0)


def run_sweep(suite: ExampleSuite, family: str, eps_list, x0=None,
              steps: int = 10_000, grid: Optional[NormGridSpec] = None,
              worst_case_value: Optional[float] = None,
              compute_worst_case: bool = True) -> List[SweepRecord]:
    """For each eps: build the candidate VF, synthesize the feedback law,
    roll out the closed loop, and assemble both the analytic bound formula
    and the grid-based performance bound.  Records are sorted by descending
    eps; a failed record carries its error message instead of being dropped.
    """
    x0 = np.atleast_1d(np.asarray(
        suite.default_x0 if x0 is None else x0, dtype=float))
    if grid is None:
        grid = family_norm_grid(suite, family, eps_list, x0)
    if worst_case_value is None and compute_worst_case:
        worst_case_value = resolve_worst_case_value(suite, x0)
    vstar_value = suite.vstar.value_at(x0, 0.0)
    bound_formula = suite.analytic_bounds.get(family)

    records: List[SweepRecord] = []
    for eps in sorted(eps_list, reverse=True):
        t_start = time.perf_counter()
        try:
            J = suite.candidate(family, eps)
            law = make_law(suite.problem, J)
            result = rollout_closed_loop(suite.problem, law, x0, steps,
                                         vstar_value=vstar_value)
            report = performance_bound(suite.problem, J, suite.vstar, x0,
                                       grid=grid,
                                       worst_case_value=worst_case_value)
            elapsed = (time.perf_counter() - t_start) * 1e3
            records.append(SweepRecord(
                eps=eps,
                loss_numeric=result.loss,
                bound_formula=(bound_formula(eps) if bound_formula
                               else math.nan),
                bound_grid=report.final_bound,
                norm_estimate=report.sobolev_norm_estimate,
                steps=steps,
                runtime_ms=elapsed,
                max_state_norm=result.trajectory.max_state_norm,
            ))
        except Exception as exc:
            elapsed = (time.perf_counter() - t_start) * 1e3
            records.append(SweepRecord(
                eps=eps, loss_numeric=math.nan, bound_formula=math.nan,
                bound_grid=math.nan, norm_estimate=math.nan, steps=steps,
                runtime_ms=elapsed, error=f"{type(exc).__name__}: {exc}"))
    return records


def run_trajectory_family(suite: ExampleSuite, family: str, eps_list,
                          x0=None, steps: int = 10_000) -> Dict[float, RolloutResult]:
    """Closed-loop rollouts only, trajectories retained, keyed by eps."""
    x0 = np.atleast_1d(np.asarray(
        suite.default_x0 if x0 is None else x0, dtype=float))
    vstar_value = suite.vstar.value_at(x0, 0.0)
    out: Dict[float, RolloutResult] = {}
    for eps in sorted(eps_list, reverse=True):
        J = suite.candidate(family, eps)
        law = make_law(suite.problem, J)
        out[eps] = rollout_closed_loop(suite.problem, law, x0, steps,
                                       vstar_value=vstar_value)
    return out


def soundness_violations(records: List[SweepRecord],
                         tol: float = 1e-3) -> List[str]:
    """Bound-soundness check: every record must satisfy
    loss <= bound_formula + tol and loss <= bound_grid + tol."""
    problems = []
    for r in records:
        if r.error:
            continue
        if math.isfinite(r.bound_formula) and r.loss_numeric > r.bound_formula + tol:
            problems.append(f"eps={r.eps:g}: loss {r.loss_numeric:.6g} exceeds "
                            f"formula bound {r.bound_formula:.6g}")
        if math.isfinite(r.bound_grid) and r.loss_numeric > r.bound_grid + tol:
            problems.append(f"eps={r.eps:g}: loss {r.loss_numeric:.6g} exceeds "
                            f"grid bound {r.bound_grid:.6g}")
    return problems


def write_sweep_csv(records: List[SweepRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_CSV_HEADER)
        for r in records:
            writer.writerow([repr(v) if isinstance(v, float) else v
                             for v in r.row()])


def write_trajectory_long_csv(results: Dict[float, RolloutResult], path) -> None:
    """Long-format trajectory CSV (eps, t, x) for scalar-state problems."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["eps", "t", "x"])
        for eps in sorted(results, reverse=True):
            traj = results[eps].trajectory
            for t, x in zip(traj.times, traj.states[:, 0]):
                writer.writerow([repr(float(eps)), repr(float(t)), repr(float(x))])


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Wide-format single-trajectory CSV: t, x..., u..., c.  The terminal row
    has no held input or cost sample; those cells are left empty."""
    n = traj.states.shape[1]
    m = traj.inputs.shape[1]
    header = (["t"] + [f"x{i}" for i in range(n)]
              + [f"u{i}" for i in range(m)] + ["c"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        n_steps = traj.inputs.shape[0]
        for i, t in enumerate(traj.times):
            row = [repr(float(t))] + [repr(float(v)) for v in traj.states[i]]
            if i < n_steps:
                row += [repr(float(v)) for v in traj.inputs[i]]
                row.append(repr(float(traj.running_cost_samples[i])))
            else:
                row += [""] * (m + 1)
            writer.writerow(row)
