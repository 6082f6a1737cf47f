import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjbgap import (Box, CandidateValueFunction, ClassLConstants, FiniteSet,
                    OcpProblem, h_tilde, hamiltonian, modified_costs,
                    reachable_radius)

E = math.e


def make_zero_problem():
    return OcpProblem(
        n=1, m=1,
        dynamics=lambda t, x, u: 0.0 * x,
        running_cost=lambda t, x, u: 0.0 * x,
        terminal_cost=lambda x: 0.0 * x,
        input_set=Box(lower=[-1.0], upper=[1.0]),
        horizon=1.0,
        constants=ClassLConstants(beta_f=1.0),
        input_affine=True,
    )


class TestInputSets:
    def test_finite_set_nonempty(self):
        with pytest.raises(ValueError):
            FiniteSet(values=())

    def test_finite_set_contains(self):
        s = FiniteSet(values=([-1.0], [0.0], [1.0]))
        assert s.contains([0.0])
        assert not s.contains([0.5])

    def test_box_ordering(self):
        with pytest.raises(ValueError):
            Box(lower=[1.0], upper=[-1.0])

    def test_box_contains_is_closed(self):
        b = Box(lower=[-1.0], upper=[1.0])
        assert b.contains([1.0]) and b.contains([-1.0])
        assert not b.contains([1.001])

    def test_box_grid_includes_endpoints_and_zero(self):
        b = Box(lower=[-1.0], upper=[1.0], grid_points_per_axis=101)
        cands = np.array(list(b.grid_candidates()))[:, 0]
        assert -1.0 in cands and 1.0 in cands and 0.0 in cands

    def test_class_l_requires_beta_f(self):
        with pytest.raises(ValueError):
            ClassLConstants(beta_f=0.0)


class TestHamiltonian:
    def test_vstar_residual_zero_at_optimal_input(self, example2_suite):
        # with the true VF the Hamiltonian is nonnegative and zero at the
        # optimal input
        prob, V = example2_suite.problem, example2_suite.vstar
        h_opt = hamiltonian(prob, V, 0.0, np.array([1.0]), np.array([-1.0]))
        assert abs(h_opt) <= 1e-12
        for u in (-0.5, 0.0, 0.7, 1.0):
            assert hamiltonian(prob, V, 0.0, np.array([1.0]),
                               np.array([u])) >= -1e-12

    def test_veps_value(self, example2_suite):
        # symbolic expansion gives H = -0.2 at (t=0, x=1, u=-1), eps = 0.1
        J = example2_suite.candidate("veps", 0.1)
        h = hamiltonian(example2_suite.problem, J, 0.0, np.array([1.0]),
                        np.array([-1.0]))
        assert h == pytest.approx(-0.2, abs=1e-12)

    def test_zero_problem_zero_hamiltonian(self):
        prob = make_zero_problem()
        J = CandidateValueFunction(value=lambda x, t: 0.0)
        for u in (-1.0, 0.0, 1.0):
            assert hamiltonian(prob, J, 0.3, np.array([2.0]),
                               np.array([u])) == pytest.approx(0.0, abs=1e-15)


class TestHTilde:
    def test_vstar_residual_example2(self, example2_suite):
        rng = np.random.default_rng(0)
        prob, V = example2_suite.problem, example2_suite.vstar
        worst = max(abs(h_tilde(prob, V, rng.uniform(-2, 2, 1),
                                rng.uniform(0, 1)))
                    for _ in range(500))
        assert worst <= 1e-8

    def test_vstar_residual_example1_positive_x(self, example1_suite):
        rng = np.random.default_rng(1)
        prob, V = example1_suite.problem, example1_suite.vstar
        for _ in range(200):
            x = rng.uniform(0.01, 3, 1)
            assert abs(h_tilde(prob, V, x, rng.uniform(0, 1))) <= 1e-8

    def test_veps_residual_formula(self, example2_suite):
        # symbolic expansion: h_tilde = -eps (1 + x) for x >= 0
        eps = 0.1
        J = example2_suite.candidate("veps", eps)
        rng = np.random.default_rng(2)
        for _ in range(100):
            x = rng.uniform(0, 2)
            t = rng.uniform(0, 0.95)
            if 2 * x * (1 - t) + eps < 0:
                continue
            got = h_tilde(example2_suite.problem, J, np.array([x]), t)
            assert got == pytest.approx(-eps * (1 + x), abs=1e-10)

    def test_h_tilde_lower_bounds_hamiltonian(self, example2_suite):
        rng = np.random.default_rng(3)
        prob = example2_suite.problem
        J = example2_suite.candidate("veps", 0.3)
        for _ in range(100):
            x = rng.uniform(-2, 2, 1)
            t = rng.uniform(0, 1)
            u = rng.uniform(-1, 1, 1)
            assert h_tilde(prob, J, x, t) <= hamiltonian(prob, J, t, x, u) + 1e-12


class TestModifiedCosts:
    def test_vstar_leaves_costs_unchanged(self, example2_suite):
        prob, V = example2_suite.problem, example2_suite.vstar
        c_mod, g_mod = modified_costs(prob, V)
        rng = np.random.default_rng(4)
        for _ in range(50):
            x = rng.uniform(-2, 2, 1)
            t = rng.uniform(0, 1)
            u = rng.uniform(-1, 1, 1)
            assert c_mod(t, x, u) == pytest.approx(prob.c(t, x, u), abs=1e-9)
        assert g_mod(np.array([0.7])) == pytest.approx(0.0, abs=1e-12)

    def test_veps_shifts_running_cost(self, example2_suite):
        eps = 0.1
        prob = example2_suite.problem
        J = example2_suite.candidate("veps", eps)
        c_mod, g_mod = modified_costs(prob, J)
        x, t, u = np.array([0.5]), 0.2, np.array([0.3])
        assert c_mod(t, x, u) == pytest.approx(
            prob.c(t, x, u) + eps * (1 + 0.5), abs=1e-10)
        # terminal cost of the modified problem is J at the horizon
        assert g_mod(np.array([0.8])) == pytest.approx(eps * 0.8, abs=1e-12)


class TestReachableRadius:
    def test_reference_values(self):
        assert reachable_radius([0.0], 1.0, 1.0) == pytest.approx(E - 1,
                                                                  rel=1e-12)
        assert reachable_radius([1.0], 1.0, 1.0) == pytest.approx(2 * E - 1,
                                                                  rel=1e-12)

    def test_vanishing_horizon(self):
        assert reachable_radius([0.0], 1.0, 1e-12) == pytest.approx(0.0,
                                                                    abs=1e-9)

    @given(st.floats(0, 5), st.floats(0.01, 3), st.floats(0.01, 3),
           st.floats(0.001, 0.5))
    @settings(max_examples=100, deadline=None)
    def test_monotone(self, x0, beta, T, bump):
        base = reachable_radius([x0], beta, T)
        assert reachable_radius([x0 + bump], beta, T) >= base
        assert reachable_radius([x0], beta + bump, T) >= base
        assert reachable_radius([x0], beta, T + bump) >= base

    def test_rejects_bad_constants(self):
        with pytest.raises(ValueError):
            reachable_radius([0.0], -1.0, 1.0)
        with pytest.raises(ValueError):
            reachable_radius([0.0], 1.0, 0.0)


class TestGradients:
    def test_fd_matches_analytic(self, example1_suite, example2_suite):
        rng = np.random.default_rng(5)
        for vf in (example1_suite.vstar, example2_suite.vstar,
                   example2_suite.candidate("veps", 0.05)):
            fd = CandidateValueFunction(value=vf.value)
            for _ in range(100):
                x = rng.uniform(-3, 3, 1)
                t = rng.uniform(0.1, 0.9)
                if vf.is_excluded(x, t) or abs(x[0]) < 1e-3:
                    continue
                ga, gf = vf.grad_x_at(x, t), fd.grad_x_at(x, t)
                assert abs(ga[0] - gf[0]) <= 1e-4 * max(1.0, abs(ga[0]))
                ta, tf = vf.grad_t_at(x, t), fd.grad_t_at(x, t)
                assert abs(ta - tf) <= 1e-4 * max(1.0, abs(ta))

    def test_fd_fallback_on_raising_closure(self):
        def bad_grad(x, t):
            raise ZeroDivisionError

        vf = CandidateValueFunction(value=lambda x, t: float(x[0]) ** 2,
                                    grad_x=bad_grad)
        assert vf.grad_x_at(np.array([1.5]), 0.0)[0] == pytest.approx(3.0,
                                                                      rel=1e-6)

    def test_gradient_undefined_without_fallback(self):
        from hjbgap import GradientUndefinedError

        def bad_grad(x, t):
            raise ZeroDivisionError

        vf = CandidateValueFunction(value=lambda x, t: float(x[0]) ** 2,
                                    grad_x=bad_grad, allow_fd_fallback=False)
        with pytest.raises(GradientUndefinedError):
            vf.grad_x_at(np.array([1.5]), 0.0)


def test_example1_growth_bound_spot_check(example1_suite):
    # |f(t, x, u)| = |x u| <= beta_f (1 + |x|) on the sampled set
    rng = np.random.default_rng(6)
    prob = example1_suite.problem
    beta = prob.constants.beta_f
    for _ in range(500):
        x = rng.uniform(-5, 5, 1)
        u = rng.uniform(-1, 1, 1)
        assert np.linalg.norm(prob.f(rng.uniform(0, 1), x, u)) \
            <= beta * (1 + np.linalg.norm(x)) + 1e-12
