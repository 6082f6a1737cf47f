"""Feedback-law synthesis: pointwise argmin of the Hamiltonian over the
input set, with a deterministic tie-break and an analytic bang-bang fast path
for scalar input-affine problems."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .problem import (Box, CandidateValueFunction, FiniteSet, OcpProblem,
                      hamiltonian)


class NonAffineHamiltonianError(ValueError):
    """Raised when the affine fast path is applied to a Hamiltonian that is
    measurably nonlinear in the input."""


class EmptyCandidateSetError(ValueError):
    pass


class Strategy(str, Enum):
    GRID = "grid"
    AFFINE = "affine"
    FINITE = "finite"


@dataclass
class ControlLaw:
    """Immutable feedback law u = k_J(x, t) derived from a candidate VF.

    ``evaluate`` always returns an element of the input set; identical
    (x, t) arguments yield identical outputs.
    """

    problem: OcpProblem
    source_vf: CandidateValueFunction
    strategy: Strategy = Strategy.GRID
    tie_tolerance: float = 1e-12
    grid_points_per_axis: Optional[int] = None

    def evaluate(self, x, t: float) -> np.ndarray:
        return synthesize_input(self, x, t)


def make_law(problem: OcpProblem, J: CandidateValueFunction,
             strategy: Optional[Strategy] = None,
             tie_tolerance: float = 1e-12,
             grid_points_per_axis: Optional[int] = None) -> ControlLaw:
    """Build a law with the natural default strategy for the problem's
    input set (finite -> exact argmin, affine box -> bang-bang, else grid)."""
    if strategy is None:
        if isinstance(problem.input_set, FiniteSet):
            strategy = Strategy.FINITE
        elif problem.input_affine and problem.input_set.dim == 1:
            strategy = Strategy.AFFINE
        else:
            strategy = Strategy.GRID
    return ControlLaw(problem=problem, source_vf=J, strategy=strategy,
                      tie_tolerance=tie_tolerance,
                      grid_points_per_axis=grid_points_per_axis)


def _tie_break(candidates: list, values: np.ndarray, tol: float) -> np.ndarray:
    """Among candidates whose value is within tol of the minimum, pick the
    one with smallest Euclidean norm, then lexicographically smallest."""
    values = np.asarray(values, dtype=float)
    vmin = float(np.min(values))
    best = None
    best_key = None
    for u, v in zip(candidates, values):
        if v <= vmin + tol:
            key = (float(np.linalg.norm(u)), tuple(float(ui) for ui in u))
            if best is None or key < best_key:
                best = u
                best_key = key
    return np.asarray(best, dtype=float)


def affine_coefficient(law: ControlLaw, x, t: float) -> float:
    """Input coefficient b(t, x) of a scalar input-affine Hamiltonian
    H = a + b u, recovered from evaluations at u = 0 and u = 1.  A third
    evaluation at u = 1/2 guards against silent nonlinearity."""
    prob = law.problem
    x = np.atleast_1d(np.asarray(x, dtype=float))
    h0 = hamiltonian(prob, law.source_vf, t, x, np.array([0.0]))
    h1 = hamiltonian(prob, law.source_vf, t, x, np.array([1.0]))
    hh = hamiltonian(prob, law.source_vf, t, x, np.array([0.5]))
    scale = max(1.0, abs(h0), abs(h1))
    if abs(hh - 0.5 * (h0 + h1)) > 1e-9 * scale:
        raise NonAffineHamiltonianError(
            f"Hamiltonian deviates from affinity in u at (x={x}, t={t})")
    return h1 - h0


def _synthesize_affine(law: ControlLaw, x: np.ndarray, t: float) -> np.ndarray:
    box = law.problem.input_set
    b = affine_coefficient(law, x, t)
    if abs(b) <= law.tie_tolerance:
        return box.min_norm_element()
    if b > 0:
        return box.lower.copy()
    return box.upper.copy()


def _synthesize_finite(law: ControlLaw, x: np.ndarray, t: float) -> np.ndarray:
    cands = law.problem.input_set.candidates()
    if not cands:
        raise EmptyCandidateSetError("FiniteSet has no candidates")
    vals = [hamiltonian(law.problem, law.source_vf, t, x, u) for u in cands]
    return _tie_break(cands, np.asarray(vals), law.tie_tolerance)


def _synthesize_grid(law: ControlLaw, x: np.ndarray, t: float) -> np.ndarray:
    box = law.problem.input_set
    k = law.grid_points_per_axis or box.grid_points_per_axis
    cands = list(box.grid_candidates(k))
    vals = np.array([hamiltonian(law.problem, law.source_vf, t, x, u)
                     for u in cands])
    u_best = _tie_break(cands, vals, law.tie_tolerance)
    h_best = float(np.min(vals))
    if box.dim == 1:
        # One golden-section refinement pass around the grid minimizer.
        lo, hi = float(box.lower[0]), float(box.upper[0])
        spacing = (hi - lo) / (k - 1)
        a = max(lo, float(u_best[0]) - spacing)
        b = min(hi, float(u_best[0]) + spacing)
        if b > a:
            res = minimize_scalar(
                lambda uu: hamiltonian(law.problem, law.source_vf, t, x,
                                       np.array([uu])),
                bounds=(a, b), method="bounded",
                options={"xatol": 1e-12})
            if res.fun < h_best - law.tie_tolerance:
                return np.array([float(res.x)])
    return u_best


def synthesize_input(law: ControlLaw, x, t: float) -> np.ndarray:
    """Feedback input: a minimizer of H_J(t, x, .) over the input set under
    the law's strategy, ties broken toward smallest ||u||_2 then
    lexicographically smallest u."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if law.strategy is Strategy.FINITE:
        return _synthesize_finite(law, x, t)
    if law.strategy is Strategy.AFFINE:
        return _synthesize_affine(law, x, t)
    if isinstance(law.problem.input_set, FiniteSet):
        return _synthesize_finite(law, x, t)
    return _synthesize_grid(law, x, t)
