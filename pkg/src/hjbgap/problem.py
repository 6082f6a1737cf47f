"""Core problem data model: input sets, OCP tuples, candidate value functions,
and the Hamiltonian quantities consumed by every other module.

State vectors are 1-D numpy arrays of shape (n,); inputs are arrays of shape
(m,).  Value-function closures built for scalar-state problems additionally
broadcast over leading axes (``supports_batch``), which the Sobolev estimator
and the DP oracle exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union

import numpy as np


class GradientUndefinedError(ValueError):
    """Raised when a gradient closure fails at a point and finite-difference
    fallback is disabled for the value function."""


@dataclass(frozen=True)
class FiniteSet:
    """Finite input set; values stored as a tuple of (m,) arrays."""

    values: tuple

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("FiniteSet must be nonempty")
        vals = tuple(np.atleast_1d(np.asarray(v, dtype=float)) for v in self.values)
        object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        return self.values[0].shape[0]

    def contains(self, u, tol: float = 1e-12) -> bool:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return any(np.all(np.abs(u - v) <= tol) for v in self.values)

    def candidates(self) -> list:
        return list(self.values)


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box [lower, upper] in R^m.

    Treated as compact; the argmin grid has ``grid_points_per_axis`` points
    per axis (endpoints included, so 0 lies on the grid for symmetric boxes
    with an odd point count).
    """

    lower: np.ndarray
    upper: np.ndarray
    grid_points_per_axis: int = 101

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape:
            raise ValueError("lower/upper must have matching shapes")
        if np.any(lo > hi):
            raise ValueError("Box requires lower <= upper componentwise")
        if self.grid_points_per_axis < 2:
            raise ValueError("grid_points_per_axis must be >= 2")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def contains(self, u, tol: float = 1e-12) -> bool:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return bool(np.all(u >= self.lower - tol) and np.all(u <= self.upper + tol))

    def min_norm_element(self) -> np.ndarray:
        return np.clip(np.zeros(self.dim), self.lower, self.upper)

    def axis_grids(self, points_per_axis: Optional[int] = None) -> list:
        k = points_per_axis or self.grid_points_per_axis
        return [np.linspace(self.lower[i], self.upper[i], k) for i in range(self.dim)]

    def grid_candidates(self, points_per_axis: Optional[int] = None) -> Iterator[np.ndarray]:
        grids = self.axis_grids(points_per_axis)
        mesh = np.meshgrid(*grids, indexing="ij")
        flat = np.stack([m.ravel() for m in mesh], axis=-1)
        for row in flat:
            yield row


InputSet = Union[FiniteSet, Box]


@dataclass(frozen=True)
class ClassLConstants:
    """Growth/Lipschitz constants of the problem class.

    Only ``beta_f`` (linear growth rate of the dynamics) enters any
    computation; the rest are stored metadata supplied by the user.
    """

    beta_f: float
    alpha_f: Optional[float] = None
    alpha_c: Optional[float] = None
    alpha_g: Optional[float] = None
    beta_c: Optional[float] = None
    beta_g: Optional[float] = None

    def __post_init__(self):
        if not (self.beta_f > 0):
            raise ValueError("beta_f must be positive")


@dataclass
class OcpProblem:
    """Finite-horizon optimal control problem {c, g, f, U, T}.

    ``dynamics``  f(t, x, u) -> (n,) state derivative
    ``running_cost``  c(t, x, u) -> scalar
    ``terminal_cost`` g(x) -> scalar

    ``input_affine`` marks scalar-input problems whose Hamiltonian is affine
    in u, enabling the bang-bang fast path.  ``elementwise`` marks
    scalar-state problems whose closures broadcast over x arrays (used by the
    DP oracle for vectorized transport).
    """

    n: int
    m: int
    dynamics: Callable
    running_cost: Callable
    terminal_cost: Callable
    input_set: InputSet
    horizon: float
    constants: ClassLConstants
    name: str = ""
    input_affine: bool = False
    elementwise: bool = False

    def __post_init__(self):
        if not (self.horizon > 0):
            raise ValueError("horizon must be positive")

    def f(self, t: float, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.dynamics(t, x, u), dtype=float))

    def c(self, t: float, x: np.ndarray, u: np.ndarray) -> float:
        return float(np.squeeze(np.asarray(self.running_cost(t, x, u))))

    def g(self, x: np.ndarray) -> float:
        return float(np.squeeze(np.asarray(self.terminal_cost(x))))


@dataclass
class CandidateValueFunction:
    """Scalar field J(x, t) with spatial and temporal gradient access.

    Gradients may be analytic closures or omitted, in which case central
    finite differences with a scale-aware step are used.  ``excludes`` is a
    predicate marking the measure-zero loci where analytic gradients are not
    classically defined (the closures are still total there, returning a
    Clarke subgradient element); the Sobolev estimator skips such points.
    """

    value: Callable
    grad_x: Optional[Callable] = None
    grad_t: Optional[Callable] = None
    fd_step: float = 1e-5
    allow_fd_fallback: bool = True
    excludes: Optional[Callable] = None
    oscillation_wavelength: Optional[float] = None
    supports_batch: bool = False
    name: str = ""

    def value_at(self, x: np.ndarray, t: float) -> float:
        return float(np.squeeze(np.asarray(self.value(np.asarray(x, dtype=float), t))))

    def is_excluded(self, x: np.ndarray, t: float) -> bool:
        if self.excludes is None:
            return False
        return bool(np.asarray(self.excludes(np.asarray(x, dtype=float), t)))

    def _fd_grad_x(self, x: np.ndarray, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        h = self.fd_step * max(1.0, float(np.max(np.abs(x))) if x.size else 1.0)
        out = np.empty_like(x)
        for i in range(x.shape[0]):
            xp = x.copy()
            xm = x.copy()
            xp[i] += h
            xm[i] -= h
            out[i] = (self.value_at(xp, t) - self.value_at(xm, t)) / (2.0 * h)
        return out

    def _fd_grad_t(self, x: np.ndarray, t: float) -> float:
        h = self.fd_step * max(1.0, abs(t))
        return (self.value_at(x, t + h) - self.value_at(x, t - h)) / (2.0 * h)

    def grad_x_at(self, x: np.ndarray, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.grad_x is None:
            return self._fd_grad_x(x, t)
        try:
            g = np.atleast_1d(np.asarray(self.grad_x(x, t), dtype=float))
            if not np.all(np.isfinite(g)):
                raise FloatingPointError("non-finite gradient")
            return g
        except Exception as exc:
            if self.allow_fd_fallback:
                return self._fd_grad_x(x, t)
            raise GradientUndefinedError(
                f"grad_x undefined at (x={x}, t={t}) for {self.name or 'VF'}"
            ) from exc

    def grad_t_at(self, x: np.ndarray, t: float) -> float:
        x = np.asarray(x, dtype=float)
        if self.grad_t is None:
            return self._fd_grad_t(x, t)
        try:
            g = float(np.squeeze(np.asarray(self.grad_t(x, t))))
            if not math.isfinite(g):
                raise FloatingPointError("non-finite gradient")
            return g
        except Exception as exc:
            if self.allow_fd_fallback:
                return self._fd_grad_t(x, t)
            raise GradientUndefinedError(
                f"grad_t undefined at (x={x}, t={t}) for {self.name or 'VF'}"
            ) from exc


def hamiltonian(problem: OcpProblem, J: CandidateValueFunction, t: float,
                x: np.ndarray, u: np.ndarray) -> float:
    """Instantaneous Hamiltonian of candidate J:

        H_J(t, x, u) = dJ/dt(x,t) + c(t,x,u) + grad_x J(x,t) . f(t,x,u)
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    gt = J.grad_t_at(x, t)
    gx = J.grad_x_at(x, t)
    return gt + problem.c(t, x, u) + float(np.dot(gx, problem.f(t, x, u)))


def _h_tilde_affine(problem: OcpProblem, J: CandidateValueFunction,
                    x: np.ndarray, t: float) -> float:
    # Affine-in-u Hamiltonian attains its minimum over a box at a vertex;
    # scalar inputs need only the two endpoints.
    box = problem.input_set
    lo = box.lower
    hi = box.upper
    return min(hamiltonian(problem, J, t, x, lo), hamiltonian(problem, J, t, x, hi))


def h_tilde(problem: OcpProblem, J: CandidateValueFunction,
            x: np.ndarray, t: float) -> float:
    """Pointwise HJB residual: the infimum of the Hamiltonian over the input
    set.  Exact for finite sets and scalar affine box problems; grid-resolved
    otherwise."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if isinstance(problem.input_set, FiniteSet):
        return min(hamiltonian(problem, J, t, x, u)
                   for u in problem.input_set.candidates())
    if problem.input_affine and problem.input_set.dim == 1:
        return _h_tilde_affine(problem, J, x, t)
    return min(hamiltonian(problem, J, t, x, u)
               for u in problem.input_set.grid_candidates())


def modified_costs(problem: OcpProblem, J: CandidateValueFunction):
    """Running/terminal cost pair of the modified OCP for which J is the
    exact value function:

        c~(t,x,u) = c(t,x,u) - inf_u H_J(x,t),    g~(x) = J(x,T)
    """
    T = problem.horizon

    def c_mod(t, x, u):
        return problem.c(t, np.atleast_1d(np.asarray(x, dtype=float)), u) \
            - h_tilde(problem, J, x, t)

    def g_mod(x):
        return J.value_at(np.atleast_1d(np.asarray(x, dtype=float)), T)

    return c_mod, g_mod


def reachable_radius(x0, beta_f: float, T: float) -> float:
    """Gronwall radius (1 + ||x0||_2) e^{beta_f T} - 1; every admissible
    trajectory from x0 stays inside the closed ball of this radius."""
    if not (beta_f > 0):
        raise ValueError("beta_f must be positive")
    if not (T > 0):
        raise ValueError("T must be positive")
    norm_x0 = float(np.linalg.norm(np.atleast_1d(np.asarray(x0, dtype=float))))
    return (1.0 + norm_x0) * math.exp(beta_f * T) - 1.0
