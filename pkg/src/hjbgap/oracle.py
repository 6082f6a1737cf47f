"""Independent verification oracle: backward dynamic programming on a 1-D
(x, t) grid.

A semi-Lagrangian scheme: explicit-Euler transport of each grid node under
every candidate input, linear interpolation of the next time level at the
foot point, and boundary clamping.  ``inf`` mode discretizes the value
function; ``sup`` mode the worst-case (cost-maximizing) value function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .problem import FiniteSet, OcpProblem


class DomainTooSmallError(RuntimeError):
    pass


class OutOfDomainError(ValueError):
    pass


DEFAULT_CANDIDATES = (-1.0, 0.0, 1.0)


@dataclass
class DpGrid:
    """DP value table over [x_min, x_max] x [0, T].

    ``values`` has shape (nt, nx); row k holds the level at t_k = k T/(nt-1).
    The terminal row equals g sampled on the x-grid exactly.
    """

    x_min: float
    x_max: float
    nx: int
    nt: int
    mode: str = "inf"
    control_candidates: Sequence[float] = DEFAULT_CANDIDATES
    values: Optional[np.ndarray] = None
    horizon: Optional[float] = None

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be < x_max")
        if self.nx < 2 or self.nt < 2:
            raise ValueError("nx and nt must be >= 2")
        if self.mode not in ("inf", "sup"):
            raise ValueError("mode must be 'inf' or 'sup'")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def times(self) -> np.ndarray:
        if self.horizon is None:
            raise ValueError("grid has not been solved yet")
        return np.linspace(0.0, self.horizon, self.nt)


def _candidate_list(spec: DpGrid) -> list:
    cands = spec.control_candidates
    if isinstance(cands, FiniteSet):
        return [float(v[0]) for v in cands.candidates()]
    return [float(v) for v in cands]


def dp_solve(problem: OcpProblem, spec: DpGrid) -> DpGrid:
    """Fill the value table by backward recursion.

    Requires a scalar-state problem; vectorizes the transport when the
    problem's closures broadcast elementwise over x arrays, and falls back
    to a per-node Python loop otherwise.
    """
    if problem.n != 1:
        raise ValueError("the DP oracle supports scalar-state problems only")
    cands = _candidate_list(spec)
    if not cands:
        raise ValueError("control_candidates must be nonempty")

    xs = spec.xs
    nt = spec.nt
    T = problem.horizon
    dt = T / (nt - 1)
    dx = (spec.x_max - spec.x_min) / (spec.nx - 1)
    opt = np.minimum if spec.mode == "inf" else np.maximum

    values = np.empty((nt, spec.nx))
    if problem.elementwise:
        values[nt - 1] = np.asarray(problem.terminal_cost(xs), dtype=float)
    else:
        values[nt - 1] = [problem.g(np.array([x])) for x in xs]

    for k in range(nt - 2, -1, -1):
        t = k * dt
        nxt = values[k + 1]
        best = None
        for u in cands:
            if problem.elementwise:
                feet = xs + dt * np.asarray(problem.dynamics(t, xs, u), dtype=float)
                stage = np.asarray(problem.running_cost(t, xs, u), dtype=float) * dt
            else:
                uvec = np.array([u])
                feet = np.array([xs[i] + dt * problem.f(t, np.array([xs[i]]), uvec)[0]
                                 for i in range(spec.nx)])
                stage = np.array([problem.c(t, np.array([xs[i]]), uvec)
                                  for i in range(spec.nx)]) * dt
            if np.any(feet < spec.x_min - dx) or np.any(feet > spec.x_max + dx):
                raise DomainTooSmallError(
                    f"Euler image exits the grid by more than one cell at t={t:.4g}")
            feet = np.clip(feet, spec.x_min, spec.x_max)
            cand = stage + np.interp(feet, xs, nxt)
            best = cand if best is None else opt(best, cand)
        values[k] = best

    spec.values = values
    spec.horizon = T
    return spec


def dp_query(grid: DpGrid, x: float, t: float) -> float:
    """Bilinear interpolation of the value table at (x, t)."""
    if grid.values is None:
        raise ValueError("grid has not been solved; call dp_solve first")
    if not (grid.x_min <= x <= grid.x_max):
        raise OutOfDomainError(f"x={x} outside [{grid.x_min}, {grid.x_max}]")
    T = grid.horizon
    if not (0.0 <= t <= T):
        raise OutOfDomainError(f"t={t} outside [0, {T}]")
    dt = T / (grid.nt - 1)
    k = min(int(t / dt), grid.nt - 2)
    theta = (t - k * dt) / dt
    xs = grid.xs
    v0 = float(np.interp(x, xs, grid.values[k]))
    v1 = float(np.interp(x, xs, grid.values[k + 1]))
    return (1.0 - theta) * v0 + theta * v1
