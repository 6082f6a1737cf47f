"""Closed-loop and open-loop trajectory rollout.

Fixed-step classical RK4 with sample-and-hold control at the step start,
paired with a left-endpoint Riemann sum for the cost, so the evaluation grid
and the quadrature grid coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .controller import ControlLaw
from .problem import CandidateValueFunction, OcpProblem, modified_costs


class NonFiniteStateError(RuntimeError):
    """State overflow during integration; carries the offending step index."""

    def __init__(self, step: int):
        super().__init__(f"non-finite state at step {step}")
        self.step = step


class InfeasibleInputError(ValueError):
    pass


@dataclass
class Trajectory:
    """Time-gridded trajectory: states at times[0..N], inputs held constant
    on [t_i, t_{i+1}), and the running-cost samples c(t_i, x_i, u_i)."""

    times: np.ndarray     # (N+1,)
    states: np.ndarray    # (N+1, n)
    inputs: np.ndarray    # (N, m)
    running_cost_samples: np.ndarray  # (N,)

    def __post_init__(self):
        n_times = self.times.shape[0]
        if self.states.shape[0] != n_times:
            raise ValueError("states/times length mismatch")
        if self.inputs.shape[0] != n_times - 1:
            raise ValueError("inputs must have one fewer entry than times")
        if self.running_cost_samples.shape[0] != n_times - 1:
            raise ValueError("cost samples must have one fewer entry than times")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly ascending")

    @property
    def max_state_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.states, axis=1)))


@dataclass
class RolloutResult:
    trajectory: Trajectory
    total_cost: float
    loss: float
    vstar_at_origin_point: float


def _rk4_step(problem: OcpProblem, t: float, x: np.ndarray, u: np.ndarray,
              dt: float) -> np.ndarray:
    k1 = problem.f(t, x, u)
    k2 = problem.f(t + 0.5 * dt, x + 0.5 * dt * k1, u)
    k3 = problem.f(t + 0.5 * dt, x + 0.5 * dt * k2, u)
    k4 = problem.f(t + dt, x + dt * k3, u)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rollout(problem: OcpProblem, x0: np.ndarray, steps: int,
             pick_input: Callable, vstar_value: Optional[float]) -> RolloutResult:
    T = problem.horizon
    dt = T / steps
    times = np.linspace(0.0, T, steps + 1)
    states = np.empty((steps + 1, problem.n))
    inputs = np.empty((steps, problem.m))
    costs = np.empty(steps)

    x = np.array(x0, dtype=float)
    states[0] = x
    for i in range(steps):
        t = times[i]
        u = pick_input(i, x, t)
        inputs[i] = u
        costs[i] = problem.c(t, x, u)
        x = _rk4_step(problem, t, x, u, dt)
        if not np.all(np.isfinite(x)):
            raise NonFiniteStateError(i)
        states[i + 1] = x

    total = float(np.sum(costs) * dt + problem.g(x))
    vstar = float(vstar_value) if vstar_value is not None else math.nan
    loss = total - vstar
    traj = Trajectory(times=times, states=states, inputs=inputs,
                      running_cost_samples=costs)
    return RolloutResult(trajectory=traj, total_cost=total, loss=loss,
                         vstar_at_origin_point=vstar)


def rollout_closed_loop(problem: OcpProblem, law: ControlLaw, x0, steps: int,
                        vstar_value: Optional[float] = None) -> RolloutResult:
    """Simulate the feedback law on a uniform grid of ``steps`` RK4 steps.

    ``vstar_value`` is V*(x0, 0): the analytic value when the problem has
    one, otherwise a DP-oracle value supplied by the caller.  Without a
    baseline the loss is NaN.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))

    def pick(_i, x, t):
        return law.evaluate(x, t)

    return _rollout(problem, x0, steps, pick, vstar_value)


def rollout_open_loop(problem: OcpProblem, input_signal, x0,
                      vstar_value: Optional[float] = None) -> RolloutResult:
    """Simulate a given piecewise-constant input sequence (one value per
    step) with the same integrator and quadrature as the closed loop."""
    seq = np.atleast_2d(np.asarray(input_signal, dtype=float))
    if seq.shape[1] != problem.m:
        seq = seq.reshape(-1, problem.m)
    for u in seq:
        if not problem.input_set.contains(u):
            raise InfeasibleInputError(f"input {u} outside the input set")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))

    def pick(i, _x, _t):
        return seq[i]

    return _rollout(problem, x0, seq.shape[0], pick, vstar_value)


def modified_cost_of(result: RolloutResult, problem: OcpProblem,
                     J: CandidateValueFunction) -> float:
    """Re-score a stored trajectory under the modified cost pair for which J
    is the exact value function (same left Riemann sum)."""
    c_mod, g_mod = modified_costs(problem, J)
    traj = result.trajectory
    dt = np.diff(traj.times)
    total = 0.0
    for i in range(traj.inputs.shape[0]):
        total += c_mod(traj.times[i], traj.states[i], traj.inputs[i]) * dt[i]
    return total + g_mod(traj.states[-1])
