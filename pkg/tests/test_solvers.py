import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import garrote_objective, lasso_objective, lattice_argmax
from hlasso import (
    ConvergenceError,
    GarroteSubproblem,
    LassoSubproblem,
    kkt_residual,
    soft_threshold,
    solve_nonneg_garrote,
    solve_weighted_lasso,
)


class TestSoftThreshold:
    def test_definition(self):
        assert soft_threshold(3.0, 1.0) == 2.0

    def test_inside_threshold(self):
        assert soft_threshold(-0.5, 1.0) == 0.0

    @given(st.floats(-1e6, 1e6))
    def test_zero_threshold_is_identity(self, z):
        assert soft_threshold(z, 0.0) == z

    @given(st.floats(-100, 100), st.floats(0, 100))
    def test_shrinks_toward_zero(self, z, t):
        out = soft_threshold(z, t)
        assert abs(out) <= abs(z)
        assert out * z >= 0.0

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError):
            soft_threshold(1.0, -0.1)


def _orthonormal(n, m, rng):
    M = rng.standard_normal((n, m))
    M -= M.mean(axis=0)
    Q, _ = np.linalg.qr(M)
    return Q[:, :m]


class TestWeightedLasso:
    def test_orthonormal_equals_soft_threshold(self, rng):
        X = _orthonormal(12, 2, rng)
        y = rng.standard_normal(12)
        t = 0.3
        sol = solve_weighted_lasso(LassoSubproblem(X, y, np.full(2, t)))
        expected = np.array([soft_threshold(v, t) for v in X.T @ y])
        assert_allclose(sol, expected, atol=1e-10)
        # cross-check against the brute-force lattice
        ref = lattice_argmax(lasso_objective(X, y, np.full(2, t)), 2, -5, 5)
        assert np.abs(sol - ref).max() < 2e-3

    def test_zero_penalty_recovers_ols(self, rng):
        X = rng.standard_normal((4, 4)) + 2.0 * np.eye(4)
        y = rng.standard_normal(4)
        sol = solve_weighted_lasso(LassoSubproblem(X, y, np.zeros(4)), tol=1e-9)
        ols = np.linalg.solve(X.T @ X, X.T @ y)
        assert_allclose(sol, ols, atol=1e-8)

    def test_full_shrinkage(self, rng):
        X = rng.standard_normal((10, 3))
        y = rng.standard_normal(10)
        pen = np.full(3, np.abs(X.T @ y).max() * 1.5)
        sol = solve_weighted_lasso(LassoSubproblem(X, y, pen))
        assert_allclose(sol, 0.0)

    def test_warm_start_used(self, rng):
        X = rng.standard_normal((20, 4))
        y = rng.standard_normal(20)
        pen = np.full(4, 0.5)
        cold = solve_weighted_lasso(LassoSubproblem(X, y, pen))
        warm = solve_weighted_lasso(LassoSubproblem(X, y, pen, init=cold))
        assert_allclose(cold, warm, atol=1e-9)

    def test_scaling_homogeneity_via_kkt(self, rng):
        X = rng.standard_normal((15, 4))
        y = rng.standard_normal(15)
        pen = np.full(4, 0.7)
        tol = 1e-9
        sol = solve_weighted_lasso(LassoSubproblem(X, y, pen), tol=tol)
        doubled = LassoSubproblem(X, 2.0 * y, 2.0 * pen)
        assert kkt_residual(doubled, 2.0 * sol) <= 2.0 * tol

    def test_nonconvergence_raises_with_iterate(self, rng):
        base = rng.standard_normal((30, 1))
        X = base + 0.001 * rng.standard_normal((30, 6))
        y = rng.standard_normal(30)
        with pytest.raises(ConvergenceError, match="max iterations") as info:
            solve_weighted_lasso(LassoSubproblem(X, y, np.full(6, 1e-4)), tol=1e-14, max_iter=2)
        assert info.value.last_iterate.shape == (6,)

    def test_sweeps_are_monotone_ascent(self, rng):
        X = rng.standard_normal((25, 5))
        y = rng.standard_normal(25)
        pen = np.full(5, 0.2)

        def objective(a):
            r = y - X @ a
            return -0.5 * r @ r - pen @ np.abs(a)

        values = []
        for sweeps in range(1, 8):
            try:
                a = solve_weighted_lasso(LassoSubproblem(X, y, pen), tol=1e-14, max_iter=sweeps)
            except ConvergenceError as exc:
                a = exc.last_iterate
            values.append(objective(a))
        diffs = np.diff(values)
        assert (diffs >= -1e-12).all()


class TestGarrote:
    def test_single_column_closed_form(self, rng):
        x = rng.standard_normal((20, 1))
        y = 0.8 * x[:, 0] + 0.1 * rng.standard_normal(20)
        c = float(x[:, 0] @ x[:, 0])
        expected = max((float(x[:, 0] @ y) - 1.0) / c, 0.0)
        sol = solve_nonneg_garrote(GarroteSubproblem(x, y, np.ones(1)))
        assert_allclose(sol, [expected], atol=1e-10)

    def test_weak_signal_all_zero(self, rng):
        X = _orthonormal(15, 3, rng)
        y = 0.5 * X[:, 0]  # x'y = 0.5 < 1 for every column
        sol = solve_nonneg_garrote(GarroteSubproblem(X, y, np.ones(3)))
        assert_allclose(sol, 0.0)
        ref = lattice_argmax(garrote_objective(X, y, np.ones(3)), 3, 0, 5)
        assert np.abs(ref).max() < 2e-3

    def test_zero_response(self, rng):
        X = rng.standard_normal((10, 2))
        sol = solve_nonneg_garrote(GarroteSubproblem(X, np.zeros(10), np.ones(2)))
        assert_allclose(sol, 0.0)

    def test_output_exactly_nonnegative(self, rng):
        for _ in range(20):
            X = rng.standard_normal((12, 4))
            y = rng.standard_normal(12)
            sol = solve_nonneg_garrote(GarroteSubproblem(X, y, np.full(4, 0.3)))
            assert (sol >= 0.0).all()
            assert not np.signbit(sol).any()  # no -0.0


class TestKktResidual:
    def test_exact_orthonormal_solution(self, rng):
        X = _orthonormal(10, 3, rng)
        y = rng.standard_normal(10)
        pen = np.full(3, 0.4)
        sol = np.array([soft_threshold(v, 0.4) for v in X.T @ y])
        assert kkt_residual(LassoSubproblem(X, y, pen), sol) <= 1e-10

    def test_zero_solution_zero_penalty(self, rng):
        X = rng.standard_normal((10, 3))
        y = rng.standard_normal(10)
        prob = LassoSubproblem(X, y, np.zeros(3))
        assert_allclose(
            kkt_residual(prob, np.zeros(3)), np.abs(X.T @ y).max(), atol=1e-12
        )

    @pytest.mark.parametrize("tol", [1e-6, 1e-9])
    def test_solver_postcondition(self, rng, tol):
        X = rng.standard_normal((25, 6))
        y = rng.standard_normal(25)
        pen = rng.uniform(0.1, 1.0, 6)
        sol = solve_weighted_lasso(LassoSubproblem(X, y, pen), tol=tol)
        assert kkt_residual(LassoSubproblem(X, y, pen), sol) <= tol
        d = solve_nonneg_garrote(GarroteSubproblem(X, y, pen), tol=tol)
        assert kkt_residual(GarroteSubproblem(X, y, pen), d) <= tol

    def test_garrote_infeasible_flagged(self, rng):
        X = rng.standard_normal((8, 2))
        y = rng.standard_normal(8)
        prob = GarroteSubproblem(X, y, np.ones(2))
        assert kkt_residual(prob, np.array([-0.5, 0.0])) >= 0.5


class TestValidation:
    def test_negative_penalty_rejected(self, rng):
        X = rng.standard_normal((5, 2))
        with pytest.raises(ValueError):
            LassoSubproblem(X, np.zeros(5), np.array([0.1, -0.1]))

    def test_dimension_mismatch(self, rng):
        X = rng.standard_normal((5, 2))
        with pytest.raises(ValueError):
            LassoSubproblem(X, np.zeros(4), np.ones(2))
        prob = LassoSubproblem(X, np.zeros(5), np.ones(2))
        with pytest.raises(ValueError):
            kkt_residual(prob, np.zeros(3))

    def test_bad_tol(self, rng):
        X = rng.standard_normal((5, 2))
        with pytest.raises(ValueError):
            solve_weighted_lasso(LassoSubproblem(X, np.zeros(5), np.ones(2)), tol=0.0)
