import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from classreg.errors import DimensionMismatch, NonPositiveGamma, RankDeficient
from classreg.features import BasisSpec, linear2d_design
from classreg.lsq import (
    LinearModel,
    classify,
    fit_ls,
    fit_ridge,
    loss_and_gradient,
    predict,
    pseudo_inverse_fit,
)

from oracles import central_difference, gauss_solve, ridge_svd

E3 = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])


class TestFitLs:
    def test_identity_columns(self):
        model, diag = fit_ls(E3, [1, 2, 3])
        np.testing.assert_allclose(model.weights, [1, 2])
        assert diag.gamma == 0
        assert diag.residual_norm == pytest.approx(3.0)

    def test_mean_of_targets(self):
        model, _ = fit_ls(np.ones((4, 1)), [1, 1, 3, 3])
        np.testing.assert_allclose(model.weights, [2])

    def test_duplicated_column(self):
        A = np.random.default_rng(0).standard_normal((10, 3))
        with pytest.raises(RankDeficient):
            fit_ls(np.column_stack([A, A[:, 0]]), np.ones(10))

    def test_too_few_rows(self):
        with pytest.raises(RankDeficient):
            fit_ls(np.ones((1, 2)), [1])

    def test_target_length(self):
        with pytest.raises(DimensionMismatch):
            fit_ls(E3, [1, 2])

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(10, 100), m=st.integers(1, 10), seed=st.integers(0, 2**31))
    def test_normal_equations_and_oracle(self, n, m, seed):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((n, m))
        t = rng.standard_normal(n)
        w = fit_ls(A, t)[0].weights
        assert np.max(np.abs(A.T @ (A @ w - t))) <= 1e-8 * (1 + np.max(np.abs(A.T @ t)))
        np.testing.assert_allclose(w, pseudo_inverse_fit(A, t).weights, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(w, gauss_solve(A.T @ A, A.T @ t), rtol=1e-8, atol=1e-10)


class TestFitRidge:
    def test_identity_columns(self):
        model, diag = fit_ridge(E3, [1, 2, 3], 1.0)
        np.testing.assert_allclose(model.weights, [0.5, 1.0])
        assert diag.gamma == 1.0

    def test_small_gamma_limit(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((20, 4))
        t = rng.standard_normal(20)
        np.testing.assert_allclose(fit_ridge(A, t, 1e-12)[0].weights, fit_ls(A, t)[0].weights, atol=1e-6)

    def test_rank_deficient_ok(self):
        A = np.random.default_rng(2).standard_normal((10, 3))
        A = np.column_stack([A, A[:, 0]])
        model, _ = fit_ridge(A, np.ones(10), 0.1)
        assert np.all(np.isfinite(model.weights))

    @pytest.mark.parametrize("gamma", [0.0, -1.0])
    def test_bad_gamma(self, gamma):
        with pytest.raises(NonPositiveGamma):
            fit_ridge(E3, [1, 2, 3], gamma)

    def test_matches_svd_oracle(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((30, 5))
        t = rng.standard_normal(30)
        for gamma in (1e-3, 0.5, 20.0):
            np.testing.assert_allclose(fit_ridge(A, t, gamma)[0].weights, ridge_svd(A, t, gamma),
                                       rtol=1e-9, atol=1e-12)

    def test_path_monotone(self):
        rng = np.random.default_rng(4)
        A = rng.standard_normal((40, 6))
        t = rng.standard_normal(40)
        fits = [fit_ridge(A, t, g)[1] for g in np.geomspace(1e-6, 1e2, 40)]
        w = np.array([f.weight_norm for f in fits])
        r = np.array([f.residual_norm for f in fits])
        assert np.all(np.diff(w) <= 1e-12 * w[:-1])
        assert np.all(np.diff(r) >= -1e-12 * r[:-1])


class TestPseudoInverse:
    def test_identity_columns(self):
        np.testing.assert_allclose(pseudo_inverse_fit(E3, [1, 2, 3]).weights, [1, 2])

    def test_scalar(self):
        np.testing.assert_allclose(pseudo_inverse_fit([[2.0]], [6.0]).weights, [3])

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient):
            pseudo_inverse_fit([[1, 1], [2, 2], [3, 3]], [1, 2, 3])


class TestPredict:
    def test_bias_only(self):
        assert predict(LinearModel([1, 0, 0], BasisSpec.linear2d()), (5, 7)) == 1

    def test_x_only(self):
        assert predict(LinearModel([0, 1, 0], BasisSpec.linear2d()), (5, 7)) == 5

    def test_polynomial(self):
        assert predict(LinearModel([1, 2, 3], BasisSpec.polynomial(3)), 2) == 17

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatch):
            predict(LinearModel([1, 0, 0], BasisSpec.linear2d()), (1, 2, 3))

    def test_weight_count_checked(self):
        with pytest.raises(DimensionMismatch):
            LinearModel([1, 2], BasisSpec.linear2d())

    @pytest.mark.parametrize("bias, expected", [(0.9, 1), (0.5, 1), (0.1, 0)])
    def test_classify_threshold(self, bias, expected):
        model = LinearModel([bias, 0, 0], BasisSpec.linear2d())
        assert classify(model, (3, 4), 0.5) == expected

    def test_default_threshold_from_model(self):
        model = LinearModel([0.4, 0, 0], BasisSpec.linear2d(), threshold=0.3)
        assert classify(model, (0, 0)) == 1


class TestSerialization:
    def test_round_trip(self):
        model = LinearModel([0.1, -2.5, 1 / 3], BasisSpec.linear2d(), gamma=0.25, threshold=0.5)
        back = LinearModel.from_json(model.to_json())
        np.testing.assert_array_equal(back.weights, model.weights)
        assert back.basis == model.basis
        assert (back.gamma, back.threshold) == (0.25, 0.5)

    def test_field_order(self):
        text = LinearModel([1, 2, 3], BasisSpec.linear2d()).to_json()
        keys = [k for k in ("basis", "weights", "gamma", "threshold")]
        assert [text.index(f'"{k}"') for k in keys] == sorted(text.index(f'"{k}"') for k in keys)

    def test_missing_field(self):
        with pytest.raises(ValueError):
            LinearModel.from_dict({"basis": "linear2d"})


class TestLossGradient:
    def test_stationary_at_solution(self):
        rng = np.random.default_rng(5)
        A = rng.standard_normal((25, 4))
        t = rng.standard_normal(25)
        w = fit_ls(A, t)[0].weights
        _, g = loss_and_gradient(A, t, w)
        assert np.max(np.abs(g)) <= 1e-9

    def test_zero_weights(self):
        A = linear2d_design([(1, 2), (3, 4), (-1, 0)])
        t = np.array([1.0, 0.0, 1.0])
        loss, g = loss_and_gradient(A, t, np.zeros(3))
        assert loss == pytest.approx(0.5 * t @ t)
        np.testing.assert_allclose(g, -A.matrix.T @ t)

    @settings(max_examples=50, deadline=None)
    @given(n=st.integers(3, 40), m=st.integers(1, 8), seed=st.integers(0, 2**31),
           gamma=st.sampled_from([0.0, 0.1, 0.3, 1.0]))
    def test_finite_differences(self, n, m, seed, gamma):
        rng = np.random.default_rng(seed)
        A = rng.standard_normal((n, m))
        t = rng.standard_normal(n)
        w = rng.standard_normal(m)
        _, g = loss_and_gradient(A, t, w, gamma)
        fd = central_difference(lambda v: loss_and_gradient(A, t, v, gamma)[0], w)
        assert np.linalg.norm(g - fd) <= 1e-5 * max(np.linalg.norm(fd), 1.0)

    def test_negative_gamma(self):
        with pytest.raises(NonPositiveGamma):
            loss_and_gradient(E3, [1, 2, 3], [0, 0], -1)
