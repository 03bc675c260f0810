import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from classreg.datagen import NoiseSpec, gen_boolean, gen_circle_two_class, gen_gaussian_two_class, gen_linear_two_class
from classreg.errors import DimensionMismatch, NegativeFeature, OutOfRange
from classreg.features import BasisSpec
from classreg.lsq import fit_ls
from classreg.online import (
    QuadraticBoundary,
    TrainConfig,
    TrainReport,
    boundary_roots,
    gradient_train,
    init_weights,
    misclassified_residual,
    perceptron_train,
    perceptron_update,
    predict_sign,
    winnow_train,
    winnow_update,
)

from oracles import power_iteration


def linear_set(seed, n=100, delta=0.0):
    ds = gen_linear_two_class(n, noise=NoiseSpec(delta, seed))
    return BasisSpec.linear2d().design(ds.features), ds.targets


class TestConfig:
    @pytest.mark.parametrize("kw", [{"eta": 0}, {"theta": 1}, {"theta": 0}, {"max_iter": 0},
                                    {"gamma": -1}, {"reg_sign": "ascent"}])
    def test_invalid(self, kw):
        with pytest.raises(OutOfRange):
            TrainConfig(**kw)

    def test_reg_sign_spelling(self):
        assert TrainConfig(reg_sign="paper-literal").reg_sign == "paper_literal"

    def test_report_rejects_false_convergence(self):
        with pytest.raises(ValueError):
            TrainReport(True, 5, 3, [], "max_iter")


class TestInitAndSign:
    def test_deterministic(self):
        np.testing.assert_array_equal(init_weights(5, 11), init_weights(5, 11))

    def test_range(self):
        w = init_weights(3, 0)
        assert w.shape == (3,) and np.all(np.abs(w) <= 0.05)

    def test_seeds_differ(self):
        assert not np.array_equal(init_weights(4, 1), init_weights(4, 2))

    @pytest.mark.parametrize("w, x, h", [((1, 0), (1, 5), 1), ((-1, 0), (1, 5), 0), ((1, -1), (1, 1), 0)])
    def test_predict_sign(self, w, x, h):
        assert predict_sign(w, x) == h

    def test_predict_sign_length(self):
        with pytest.raises(DimensionMismatch):
            predict_sign([1, 2], [1, 2, 3])


class TestUpdates:
    def test_perceptron_step(self):
        np.testing.assert_allclose(perceptron_update([0, 0, 0], [1, 2, 3], 1, h=0), [0.5, 1, 1.5])

    def test_perceptron_no_change_when_correct(self):
        w = np.array([0.3, -0.2])
        np.testing.assert_array_equal(perceptron_update(w, [1, 1], 1, h=1), w)

    def test_perceptron_decay_sign(self):
        w = np.array([1.0, 1.0])
        down = perceptron_update(w, [1, 1], 1, eta=0.5, gamma=0.1, h=1)
        up = perceptron_update(w, [1, 1], 1, eta=0.5, gamma=0.1, reg_sign="paper_literal", h=1)
        np.testing.assert_allclose(down, [0.95, 0.95])
        np.testing.assert_allclose(up, [1.05, 1.05])

    def test_winnow_step(self):
        np.testing.assert_allclose(winnow_update([1, 1], [1, 0], 1, alpha=2, h=0), [2, 1])

    def test_winnow_no_change(self):
        np.testing.assert_array_equal(winnow_update([1.5, 3], [1, 1], 0, h=0), [1.5, 3])


class TestPerceptron:
    @pytest.mark.parametrize("seed", range(8))
    def test_separable_converges(self, seed):
        A, t = linear_set(seed)
        model, rep = perceptron_train(A, t, TrainConfig(max_iter=20_000, seed=seed))
        assert rep.converged and rep.stop_reason == "all_correct"
        assert rep.final_misclassified == 0
        assert rep.iterations <= 20_000
        assert model.weights.shape == (3,)

    def test_overlap_hits_cap(self):
        ds = gen_gaussian_two_class(200, separation=1.0, sigma=1.0, seed=0)
        A = BasisSpec.linear2d().design(ds.features)
        _, rep = perceptron_train(A, ds.targets, TrainConfig(max_iter=300))
        assert not rep.converged
        assert rep.stop_reason == "max_iter"
        assert rep.iterations == 300

    def test_deterministic(self):
        A, t = linear_set(3)
        m1, r1 = perceptron_train(A, t, TrainConfig(seed=4))
        m2, r2 = perceptron_train(A, t, TrainConfig(seed=4))
        np.testing.assert_array_equal(m1.weights, m2.weights)
        assert r1 == r2

    def test_circle_needs_lift(self):
        ds = gen_circle_two_class(200, seed=1)
        lin = BasisSpec.linear2d().design(ds.features)
        quad = BasisSpec.quadratic2d().design(ds.features)
        assert not perceptron_train(lin, ds.targets, TrainConfig(max_iter=2000))[1].converged
        _, rep = perceptron_train(quad, ds.targets, TrainConfig(max_iter=2000))
        assert rep.converged and rep.final_misclassified == 0

    def test_history_sampled(self):
        ds = gen_gaussian_two_class(60, separation=0.5, seed=2)
        A = BasisSpec.linear2d().design(ds.features)
        _, rep = perceptron_train(A, ds.targets, TrainConfig(max_iter=250_000))
        assert len(rep.loss_history) <= 100_001
        assert rep.history_iterations == sorted(rep.history_iterations)

    def test_rejects_non_binary(self):
        with pytest.raises(OutOfRange):
            perceptron_train(np.ones((2, 2)), [0, 2])

    def test_report_json(self):
        A, t = linear_set(0)
        _, rep = perceptron_train(A, t)
        doc = json.loads(rep.to_json())
        assert doc["converged"] is True and doc["stop_reason"] == "all_correct"


class TestGradient:
    def test_starts_at_solution(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((20, 3))
        t = rng.standard_normal(20)
        w = fit_ls(A, t)[0].weights
        _, rep = gradient_train(A, t, TrainConfig(), w0=w)
        assert rep.stop_reason == "gradient_small" and rep.iterations == 0

    def test_scalar_contraction(self):
        model, rep = gradient_train([[1.0]], [1.0], TrainConfig(eta=0.5, theta=1e-10), w0=[0.0])
        assert rep.converged
        assert model.weights[0] == pytest.approx(1.0, abs=1e-9)

    def test_loss_non_increasing_below_step_limit(self):
        rng = np.random.default_rng(7)
        A = rng.standard_normal((30, 4))
        t = (rng.random(30) > 0.5).astype(float)
        lam = power_iteration(A.T @ A)
        cfg = TrainConfig(eta=0.9 / lam, theta=1e-9, max_iter=5000)
        _, rep = gradient_train(A, t, cfg)
        loss = np.array(rep.loss_history)
        assert np.all(np.diff(loss) <= 1e-12 * loss[:-1])

    def test_large_step_explodes(self):
        rng = np.random.default_rng(8)
        A = rng.standard_normal((30, 4))
        t = rng.standard_normal(30)
        lam = power_iteration(A.T @ A)
        _, rep = gradient_train(A, t, TrainConfig(eta=3.0 / lam, max_iter=10_000))
        assert rep.stop_reason == "grad_exploded" and not rep.converged

    def test_paper_literal_moves_uphill(self):
        rng = np.random.default_rng(9)
        A = rng.standard_normal((20, 3))
        t = rng.standard_normal(20)
        _, rep = gradient_train(A, t, TrainConfig(eta=0.01, reg_sign="paper_literal", max_iter=50))
        assert rep.loss_history[-1] > rep.loss_history[0]

    def test_matches_ridge(self):
        rng = np.random.default_rng(10)
        A = rng.standard_normal((40, 3))
        t = rng.standard_normal(40)
        gamma = 0.5
        lam = power_iteration(A.T @ A)
        model, rep = gradient_train(A, t, TrainConfig(eta=1.0 / (lam + gamma), gamma=gamma,
                                                      theta=1e-10, max_iter=100_000))
        H = A.T @ A + gamma * np.eye(3)
        np.testing.assert_allclose(model.weights, np.linalg.solve(H, A.T @ t), atol=1e-8)

    def test_iterations_capped(self):
        rng = np.random.default_rng(11)
        A = rng.standard_normal((10, 2))
        _, rep = gradient_train(A, rng.standard_normal(10), TrainConfig(eta=1e-4, max_iter=7, theta=1e-12))
        assert rep.iterations == 7 and rep.stop_reason == "max_iter"


class TestWinnow:
    def test_boolean_converges_and_agrees(self):
        ds = gen_boolean(64, 4, 0)
        A = BasisSpec.linear(4).design(ds.features)
        mw, rw = winnow_train(A, ds.targets)
        mp, rp = perceptron_train(A, ds.targets)
        assert rw.converged and rw.final_misclassified == 0
        assert rw.min_weight > 0 and np.all(mw.weights > 0)
        M = A.matrix
        np.testing.assert_array_equal(M @ mw.weights > mw.threshold, M @ mp.weights > 0)

    @pytest.mark.parametrize("target", range(4))
    def test_each_attribute(self, target):
        ds = gen_boolean(64, 4, target)
        _, rep = winnow_train(BasisSpec.linear(4).design(ds.features), ds.targets)
        assert rep.converged

    def test_random_init(self):
        ds = gen_boolean(32, 3, 1)
        _, rep = winnow_train(BasisSpec.linear(3).design(ds.features), ds.targets, init="random")
        assert rep.converged and rep.min_weight > 0

    def test_negative_feature(self):
        with pytest.raises(NegativeFeature):
            winnow_train(np.array([[1.0, -1.0]]), [1])

    def test_alpha_bound(self):
        with pytest.raises(OutOfRange):
            winnow_train(np.ones((2, 2)), [0, 1], alpha=1.0)


class TestMisclassifiedResidual:
    def test_all_correct(self):
        assert misclassified_residual([1.0, 0.0], [[1, 2], [1, -3]], [1, 1]) == 0

    def test_single(self):
        assert misclassified_residual([1.0], [[1.0]], [-1]) == 1

    def test_brute_force(self):
        rng = np.random.default_rng(12)
        A = rng.standard_normal((50, 3))
        w = rng.standard_normal(3)
        t = rng.choice([-1.0, 1.0], 50)
        ref = 0.0
        for i in range(50):
            s = t[i] * (A[i] @ w)
            if s <= 0:
                ref -= s
        assert misclassified_residual(w, A, t) == pytest.approx(ref, rel=1e-12)
        assert ref >= 0

    def test_encoding(self):
        with pytest.raises(OutOfRange):
            misclassified_residual([1.0], [[1.0]], [0])


class TestBoundaryRoots:
    def test_circle(self):
        assert boundary_roots(QuadraticBoundary([-4, 0, 0, 0, 0, 1]), 0.0) == (-2.0, 2.0)

    def test_empty(self):
        assert boundary_roots(QuadraticBoundary([1, 0, 0, 0, 0, 1]), 0.0) == ()

    def test_linear_degeneration(self):
        for x1 in (-3.0, 0.0, 5.0):
            assert boundary_roots(QuadraticBoundary([-4, 0, 2, 0, 0, 0]), x1) == (2.0,)

    def test_fully_degenerate(self):
        assert boundary_roots(QuadraticBoundary([1, 0, 0, 0, 0, 0]), 1.0) == ()

    def test_double_root(self):
        assert boundary_roots(QuadraticBoundary([1, 0, -2, 0, 0, 1]), 0.0) == (1.0,)

    def test_needs_six(self):
        with pytest.raises(DimensionMismatch):
            QuadraticBoundary([1, 2, 3])

    @settings(max_examples=200, deadline=None)
    @given(w=st.lists(st.floats(-10, 10, allow_nan=False), min_size=6, max_size=6),
           x1=st.floats(-10, 10, allow_nan=False))
    def test_roots_on_conic(self, w, x1):
        qb = QuadraticBoundary(w)
        roots = qb.roots(x1)
        assert list(roots) == sorted(roots)
        for x2 in roots:
            # residual relative to the size of the terms summed at the root
            terms = np.abs([w[0], w[1] * x1, w[2] * x2, w[3] * x1 * x1, w[4] * x1 * x2, w[5] * x2 * x2])
            assert abs(qb(x1, x2)) <= 1e-8 * (1 + terms.sum())
