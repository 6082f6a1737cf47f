"""Built-in benchmark problems with analytic value functions, worst-case
value functions, candidate-VF families, and analytic feedback laws.

Problems are registered by name ("example1", "example2"); custom problems
are authored in code against the OcpProblem interface and added with
``register``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .problem import (Box, CandidateValueFunction, ClassLConstants,
                      OcpProblem)

V2_FREQUENCY = 1.0e6  # spatial frequency of the fast-oscillation candidate


@dataclass
class ExampleSuite:
    """A problem together with everything needed to verify it end to end."""

    problem: OcpProblem
    vstar: CandidateValueFunction
    worst_case_vf: Optional[CandidateValueFunction]
    candidates: Dict[str, Callable]        # family name -> (eps -> VF)
    analytic_bounds: Dict[str, Callable]   # family name -> (eps -> bound)
    default_eps: Dict[str, List[float]]
    default_x0: np.ndarray
    analytic_laws: Dict[str, Callable] = field(default_factory=dict)

    def candidate(self, family: str, eps: float) -> CandidateValueFunction:
        if family not in self.candidates:
            raise KeyError(f"unknown VF family {family!r}; have "
                           f"{sorted(self.candidates)}")
        return self.candidates[family](eps)


def _scalar_vf(value_s, gradx_s, gradt_s, *, excludes_s=None, name="",
               oscillation_wavelength=None) -> CandidateValueFunction:
    """Lift closures on raw x-values (scalars or arrays) to the (.., 1)
    state-vector convention, with batch broadcasting."""

    def value(x, t):
        return value_s(np.asarray(x, dtype=float)[..., 0], t)

    def grad_x(x, t):
        return np.asarray(gradx_s(np.asarray(x, dtype=float)[..., 0], t))[..., None]

    def grad_t(x, t):
        return gradt_s(np.asarray(x, dtype=float)[..., 0], t)

    excludes = None
    if excludes_s is not None:
        def excludes(x, t):
            return excludes_s(np.asarray(x, dtype=float)[..., 0], t)

    return CandidateValueFunction(value=value, grad_x=grad_x, grad_t=grad_t,
                                  excludes=excludes, supports_batch=True,
                                  oscillation_wavelength=oscillation_wavelength,
                                  name=name)


# -- Example 1: scalar bilinear dynamics, terminal cost only -----------------

def _e1_branch(x, t):
    # exp(t-1) on x>0, exp(1-t) on x<0, 0 at the kink (Clarke choice)
    return np.where(x > 0, np.exp(t - 1.0),
                    np.where(x < 0, np.exp(1.0 - t), 0.0))


def _e1_vstar_value(x, t):
    return _e1_branch(x, t) * x


def _e1_vstar_gradt(x, t):
    return np.where(x > 0, np.exp(t - 1.0) * x,
                    np.where(x < 0, -np.exp(1.0 - t) * x, 0.0))


def _e1_worst_branch(x, t):
    return np.where(x > 0, np.exp(1.0 - t),
                    np.where(x < 0, np.exp(t - 1.0), 0.0))


def example1() -> ExampleSuite:
    """Bilinear scalar problem: c = 0, g(x) = x, f = x u, U = [-1, 1], T = 1.

    The optimal value splits into exponential branches around x = 0.  Two
    candidate families perturb it: "v1" adds sqrt(eps) sin(x/eps), which
    converges uniformly but not in W^{1,inf}; "v2" adds eps^2 sin(1e6 x),
    which converges in W^{1,inf}.
    """
    T = 1.0
    problem = OcpProblem(
        n=1, m=1,
        dynamics=lambda t, x, u: x * u,
        running_cost=lambda t, x, u: np.zeros_like(np.asarray(x, dtype=float)),
        terminal_cost=lambda x: x,
        input_set=Box(lower=[-1.0], upper=[1.0]),
        horizon=T,
        constants=ClassLConstants(beta_f=1.0, alpha_f=1.0, alpha_g=1.0,
                                  beta_g=1.0),
        name="example1",
        input_affine=True,
        elementwise=True,
    )

    def excl(x, t):
        return x == 0.0

    vstar = _scalar_vf(_e1_vstar_value, _e1_branch, _e1_vstar_gradt,
                       excludes_s=excl, name="example1.vstar")
    worst = _scalar_vf(lambda x, t: _e1_worst_branch(x, t) * x,
                       _e1_worst_branch,
                       lambda x, t: np.where(x > 0, -np.exp(1.0 - t) * x,
                                             np.where(x < 0, np.exp(t - 1.0) * x,
                                                      0.0)),
                       excludes_s=excl, name="example1.worstcase")

    def v1(eps: float) -> CandidateValueFunction:
        rt = math.sqrt(eps)
        return _scalar_vf(
            lambda x, t: _e1_vstar_value(x, t) + rt * np.sin(x / eps),
            lambda x, t: _e1_branch(x, t) + np.cos(x / eps) / rt,
            _e1_vstar_gradt,
            excludes_s=excl, name=f"example1.v1(eps={eps:g})",
            oscillation_wavelength=2.0 * math.pi * eps)

    def v2(eps: float) -> CandidateValueFunction:
        amp = eps * eps
        return _scalar_vf(
            lambda x, t: _e1_vstar_value(x, t) + amp * np.sin(V2_FREQUENCY * x),
            lambda x, t: _e1_branch(x, t) + amp * V2_FREQUENCY * np.cos(V2_FREQUENCY * x),
            _e1_vstar_gradt,
            excludes_s=excl, name=f"example1.v2(eps={eps:g})",
            oscillation_wavelength=2.0 * math.pi / V2_FREQUENCY)

    worst_gap_at_1 = math.e - math.exp(-1.0)  # printed bound uses x0 = 1

    return ExampleSuite(
        problem=problem,
        vstar=vstar,
        worst_case_vf=worst,
        candidates={"vstar": lambda eps: vstar, "v1": v1, "v2": v2},
        analytic_bounds={
            "vstar": lambda eps: 0.0,
            "v1": lambda eps: min(4.0 * math.e * (math.sqrt(eps) + 1.0 / math.sqrt(eps)),
                                  worst_gap_at_1),
            "v2": lambda eps: min(4.0 * math.e * (1.0 + V2_FREQUENCY) * eps * eps,
                                  worst_gap_at_1),
        },
        default_eps={
            "v1": [10.0 ** e for e in (-1.0, -1.5, -2.0, -2.5, -3.0, -3.5, -4.0)],
            "v2": [10.0 ** e for e in (-1.0, -1.5, -2.0, -2.5, -3.0, -3.5, -4.0)],
            "vstar": [1.0],
        },
        default_x0=np.array([1.0]),
    )


# -- Example 2: stable linear dynamics with state-dependent running cost -----

def example2() -> ExampleSuite:
    """Scalar problem: c = (1 + 2(T-t)) x^2 + 2(T-t)|x|, g = 0, f = -x + u,
    U = [-1, 1], T = 1.  The value function x^2 (T-t) is globally smooth; the
    candidate family adds the linear tilt eps * x, whose feedback misses the
    optimal switching surface yet achieves vanishing loss."""
    T = 1.0
    problem = OcpProblem(
        n=1, m=1,
        dynamics=lambda t, x, u: -x + u,
        running_cost=lambda t, x, u: (1.0 + 2.0 * (T - t)) * x * x
        + 2.0 * (T - t) * np.abs(x),
        terminal_cost=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        input_set=Box(lower=[-1.0], upper=[1.0]),
        horizon=T,
        constants=ClassLConstants(beta_f=1.0, alpha_f=1.0),
        name="example2",
        input_affine=True,
        elementwise=True,
    )

    vstar = _scalar_vf(lambda x, t: x * x * (T - t),
                       lambda x, t: 2.0 * x * (T - t),
                       lambda x, t: -x * x,
                       name="example2.vstar")

    def veps(eps: float) -> CandidateValueFunction:
        return _scalar_vf(lambda x, t: x * x * (T - t) + eps * x,
                          lambda x, t: 2.0 * x * (T - t) + eps,
                          lambda x, t: -x * x,
                          name=f"example2.veps(eps={eps:g})")

    def pi_star(x, t):
        xv = float(np.atleast_1d(np.asarray(x, dtype=float))[0])
        return np.array([-float(np.sign(2.0 * xv * (T - t)))])

    def pi_hat(eps: float):
        def law(x, t):
            xv = float(np.atleast_1d(np.asarray(x, dtype=float))[0])
            return np.array([-float(np.sign(2.0 * xv * (T - t) + eps))])
        return law

    return ExampleSuite(
        problem=problem,
        vstar=vstar,
        worst_case_vf=None,  # no closed form; sup-mode DP oracle instead
        candidates={"vstar": lambda eps: vstar, "veps": veps},
        analytic_bounds={
            "vstar": lambda eps: 0.0,
            "veps": lambda eps: 2.0 * math.e ** 2 * eps,
        },
        default_eps={
            "veps": [0.5, 0.1, 0.05, 0.01, 0.005, 0.001],
            "vstar": [1.0],
        },
        default_x0=np.array([0.0]),
        analytic_laws={"pi_star": pi_star, "pi_hat": pi_hat},
    )


_REGISTRY: Dict[str, Callable[[], ExampleSuite]] = {
    "example1": example1,
    "example2": example2,
}


def register(name: str, factory: Callable[[], ExampleSuite]) -> None:
    _REGISTRY[name] = factory


def available_problems() -> List[str]:
    return sorted(_REGISTRY)


def get_suite(name: str) -> ExampleSuite:
    if name not in _REGISTRY:
        raise KeyError(f"unknown problem {name!r}; have {available_problems()}")
    return _REGISTRY[name]()
