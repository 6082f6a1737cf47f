"""Feedback controller synthesis from approximate value functions, with
Sobolev-norm suboptimality bounds and a backward-DP verification oracle."""

from .bounds import (BoundReport, NormGridSpec, ResolutionWarning,
                     bound_constant, performance_bound,
                     sobolev_norm_estimate, worst_case_gap)
from .controller import (ControlLaw, Strategy, affine_coefficient, make_law,
                         synthesize_input)
from .oracle import DpGrid, dp_query, dp_solve
from .problem import (Box, CandidateValueFunction, ClassLConstants, FiniteSet,
                      GradientUndefinedError, OcpProblem, h_tilde, hamiltonian,
                      modified_costs, reachable_radius)
from .registry import (ExampleSuite, available_problems, example1, example2,
                       get_suite, register)
from .simulate import (RolloutResult, Trajectory, modified_cost_of,
                       rollout_closed_loop, rollout_open_loop)
from .sweep import (SweepRecord, run_sweep, run_trajectory_family,
                    soundness_violations, write_sweep_csv)

__version__ = "0.1.0"
