import math

import numpy as np
import pytest

from hjbgap import DpGrid, dp_query, dp_solve
from hjbgap.oracle import DomainTooSmallError, OutOfDomainError


def solve(suite, mode, half, nx=801, nt=801):
    grid = DpGrid(x_min=-half, x_max=half, nx=nx, nt=nt, mode=mode)
    return dp_solve(suite.problem, grid)


class TestGridValidation:
    def test_rejects_bad_extents(self):
        with pytest.raises(ValueError):
            DpGrid(x_min=1.0, x_max=-1.0, nx=10, nt=10)
        with pytest.raises(ValueError):
            DpGrid(x_min=-1.0, x_max=1.0, nx=1, nt=10)
        with pytest.raises(ValueError):
            DpGrid(x_min=-1.0, x_max=1.0, nx=10, nt=10, mode="max")

    def test_query_requires_solve(self):
        grid = DpGrid(x_min=-1.0, x_max=1.0, nx=10, nt=10)
        with pytest.raises(ValueError):
            dp_query(grid, 0.0, 0.0)

    def test_query_domain_checks(self, example2_suite):
        grid = solve(example2_suite, "inf", 2.0, nx=101, nt=101)
        with pytest.raises(OutOfDomainError):
            dp_query(grid, 3.0, 0.0)
        with pytest.raises(OutOfDomainError):
            dp_query(grid, 0.0, 2.0)

    def test_domain_too_small(self, example1_suite):
        # from x = 2 the Euler image under u = 1 leaves a [-2, 2] grid by
        # more than a cell when dt is large
        grid = DpGrid(x_min=-2.0, x_max=2.0, nx=11, nt=3)
        with pytest.raises(DomainTooSmallError):
            dp_solve(example1_suite.problem, grid)

    def test_scalar_state_only(self, example2_suite):
        import dataclasses
        prob2 = dataclasses.replace(example2_suite.problem, n=2)
        with pytest.raises(ValueError):
            dp_solve(prob2, DpGrid(x_min=-1, x_max=1, nx=10, nt=10))


class TestTerminalRow:
    def test_terminal_row_is_exact(self, example1_suite):
        grid = solve(example1_suite, "inf", 5.0, nx=51, nt=51)
        assert np.allclose(grid.values[-1], grid.xs)

    def test_times_axis(self, example1_suite):
        grid = solve(example1_suite, "inf", 5.0, nx=51, nt=51)
        ts = grid.times()
        assert ts[0] == 0.0 and ts[-1] == example1_suite.problem.horizon


class TestAgreement:
    def test_example1_inf_matches_vstar(self, example1_suite):
        grid = solve(example1_suite, "inf", 5.0)
        got = dp_query(grid, 1.0, 0.0)
        assert got == pytest.approx(math.exp(-1), abs=2e-3)

    def test_example1_sup_matches_worst_case(self, example1_suite):
        grid = solve(example1_suite, "sup", 5.0)
        got = dp_query(grid, 1.0, 0.0)
        assert got == pytest.approx(math.e, abs=5e-3)

    def test_example2_inf_matches_vstar(self, example2_suite):
        grid = solve(example2_suite, "inf", 2.0)
        got = dp_query(grid, 0.5, 0.0)
        assert got == pytest.approx(0.25, abs=4e-3)

    def test_refinement_improves_example2(self, example2_suite):
        errors = []
        for nx in (101, 401, 1601):
            grid = solve(example2_suite, "inf", 2.0, nx=nx, nt=nx)
            errors.append(abs(dp_query(grid, 0.5, 0.0) - 0.25))
        assert errors[2] < errors[1] < errors[0]

    def test_interior_slice_matches_vstar(self, example2_suite):
        grid = solve(example2_suite, "inf", 2.0)
        for x in (-1.0, -0.3, 0.0, 0.4, 1.2):
            for t in (0.0, 0.25, 0.6):
                want = example2_suite.vstar.value_at(np.array([x]), t)
                assert dp_query(grid, x, t) == pytest.approx(want, abs=8e-3)


class TestFallbackPath:
    def test_loop_path_matches_vectorized(self, example2_suite):
        import dataclasses
        prob = example2_suite.problem
        slow = dataclasses.replace(prob, elementwise=False)
        g_fast = solve(example2_suite, "inf", 2.0, nx=41, nt=41)
        g_slow = dp_solve(slow, DpGrid(x_min=-2.0, x_max=2.0, nx=41, nt=41))
        assert np.allclose(g_fast.values, g_slow.values, atol=1e-12)

    def test_finite_set_candidates_accepted(self, example2_suite):
        from hjbgap import FiniteSet
        grid = DpGrid(x_min=-2.0, x_max=2.0, nx=201, nt=201,
                      control_candidates=FiniteSet(values=([-1.0], [0.0], [1.0])))
        dp_solve(example2_suite.problem, grid)
        assert dp_query(grid, 0.5, 0.0) == pytest.approx(0.25, abs=2e-2)
