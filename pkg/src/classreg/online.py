"""Iterative trainers: full-batch gradient, perceptron and WINNOW.

Sign convention
---------------
``reg_sign="descent"`` (default) moves against the gradient of
``0.5*||t - y||^2 + 0.5*gamma*||w||^2``, so the regularization term acts as
weight decay: ``w += eta*((c - h)*x - gamma*w)`` for the perceptron and
``w -= eta*G`` for the gradient trainer. ``reg_sign="paper_literal"`` flips
both signs to ``+gamma*w`` / ``w + eta*G``, kept for comparison only: with
``gamma > 0`` these grow the penalty instead of shrinking it.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, NegativeFeature, OutOfRange
from .linalg import as_vector
from .lsq import LinearModel, classify_rows, loss_and_gradient, unwrap

DESCENT = "descent"
PAPER_LITERAL = "paper_literal"

#: Sample the loss history so at most about this many points are kept.
HISTORY_POINTS = 100_000
#: ||G|| above this multiple of its running minimum counts as blow-up.
GROWTH_FACTOR = 1e3
INIT_SCALE = 0.05

STOP_REASONS = ("gradient_small", "all_correct", "grad_exploded", "weights_stabilized", "max_iter")
CONVERGED_REASONS = ("gradient_small", "all_correct", "weights_stabilized")


@dataclass(frozen=True)
class TrainConfig:
    eta: float = 0.5
    gamma: float = 0.0
    theta: float = 1e-6
    max_iter: int = 100_000
    seed: int = 0
    reg_sign: str = DESCENT

    def __post_init__(self):
        if not self.eta > 0:
            raise OutOfRange(f"eta must be positive, got {self.eta}")
        if not self.gamma >= 0:
            raise OutOfRange(f"gamma must be non-negative, got {self.gamma}")
        if not 0 < self.theta < 1:
            raise OutOfRange(f"theta must lie in (0, 1), got {self.theta}")
        if int(self.max_iter) < 1:
            raise OutOfRange(f"max_iter must be at least 1, got {self.max_iter}")
        if self.seed < 0:
            raise OutOfRange(f"seed must be non-negative, got {self.seed}")
        sign = self.reg_sign.replace("-", "_")
        if sign not in (DESCENT, PAPER_LITERAL):
            raise OutOfRange(f"reg_sign must be 'descent' or 'paper_literal', got {self.reg_sign!r}")
        object.__setattr__(self, "reg_sign", sign)
        object.__setattr__(self, "max_iter", int(self.max_iter))


@dataclass
class TrainReport:
    converged: bool
    iterations: int
    final_misclassified: int
    loss_history: list[float]
    stop_reason: str
    history_iterations: list[int] = field(default_factory=list)
    misclassified_history: list[int] = field(default_factory=list)
    min_weight: float | None = None

    def __post_init__(self):
        if self.stop_reason not in STOP_REASONS:
            raise ValueError(f"unknown stop reason {self.stop_reason!r}")
        if self.converged and self.stop_reason not in CONVERGED_REASONS:
            raise ValueError(f"stop reason {self.stop_reason!r} cannot mark convergence")

    def to_dict(self) -> dict:
        doc = asdict(self)
        if doc["min_weight"] is None:
            del doc["min_weight"]
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def write_history_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["iteration", "loss", "misclassified_count"])
            for it, loss, miss in zip(self.history_iterations, self.loss_history,
                                      self.misclassified_history):
                writer.writerow([it, repr(float(loss)), miss])


def init_weights(m: int, seed: int = 0) -> np.ndarray:
    """``m`` weights drawn uniformly from [-0.05, 0.05], reproducible per seed."""
    if m < 1:
        raise OutOfRange(f"need at least one weight, got {m}")
    return np.random.default_rng(seed).uniform(-INIT_SCALE, INIT_SCALE, size=m)


def predict_sign(omega, features) -> int:
    """1 if ``omega @ features > 0``, else 0. An exact zero is class 0."""
    w = as_vector(omega, "omega")
    x = as_vector(features, "features")
    if w.shape != x.shape:
        raise DimensionMismatch(f"omega has length {w.shape[0]}, features {x.shape[0]}")
    return int(w @ x > 0.0)


def perceptron_update(omega, x, c: int, eta: float = 0.5, gamma: float = 0.0,
                      reg_sign: str = DESCENT, h: int | None = None) -> np.ndarray:
    """One perceptron step on a single example; returns the new weights."""
    w = as_vector(omega, "omega")
    x = as_vector(x, "x")
    if h is None:
        h = predict_sign(w, x)
    decay = -1.0 if reg_sign.replace("-", "_") == DESCENT else 1.0
    return w + eta * ((c - h) * x + decay * gamma * w)


def winnow_update(omega, x, c: int, alpha: float = 2.0, h: int | None = None,
                  threshold: float = 0.0) -> np.ndarray:
    """One WINNOW step: each weight is multiplied by ``alpha**((c - h) * x_i)``."""
    w = as_vector(omega, "omega")
    x = as_vector(x, "x")
    if h is None:
        h = int(w @ x > threshold)
    return w * alpha ** ((c - h) * x)


def _binary_targets(t, n_rows: int) -> np.ndarray:
    t = as_vector(t, "t")
    if t.shape[0] != n_rows:
        raise DimensionMismatch(f"t has length {t.shape[0]}, A has {n_rows} rows")
    if not np.all((t == 0.0) | (t == 1.0)):
        raise OutOfRange("targets must be 0 or 1")
    return t


def _stride(max_iter: int) -> int:
    return max(1, math.ceil(max_iter / HISTORY_POINTS))


def _start(w0, m: int, seed: int) -> np.ndarray:
    if w0 is None:
        return init_weights(m, seed)
    w = as_vector(w0, "w0").copy()
    if w.shape[0] != m:
        raise DimensionMismatch(f"w0 has length {w.shape[0]}, expected {m}")
    return w


def perceptron_train(A, t, cfg: TrainConfig = TrainConfig(), w0=None
                     ) -> tuple[LinearModel, TrainReport]:
    """Online perceptron over the rows of ``A`` in fixed order.

    Stops after the first pass in which every example was classified
    correctly, or after ``cfg.max_iter`` passes. Non-convergence is reported,
    never raised.
    """
    M, basis = unwrap(A)
    t = _binary_targets(t, M.shape[0])
    w = _start(w0, M.shape[1], cfg.seed)
    decay = -1.0 if cfg.reg_sign == DESCENT else 1.0
    w, passes, converged, h_it, h_loss, h_err = _kernels.perceptron_passes(
        M, t, w, float(cfg.eta), float(cfg.gamma), decay, cfg.max_iter, _stride(cfg.max_iter)
    )
    final = int(np.sum((M @ w > 0.0).astype(np.float64) != t))
    report = TrainReport(
        converged=bool(converged),
        iterations=int(passes),
        final_misclassified=final,
        loss_history=[float(v) for v in h_loss],
        stop_reason="all_correct" if converged else "max_iter",
        history_iterations=[int(v) for v in h_it],
        misclassified_history=[int(v) for v in h_err],
    )
    return LinearModel(w, basis, gamma=cfg.gamma, threshold=0.0), report


def winnow_train(A, t, alpha: float = 2.0, cfg: TrainConfig = TrainConfig(),
                 threshold: float | None = None, init: str = "ones", w0=None
                 ) -> tuple[LinearModel, TrainReport]:
    """Multiplicative-update learner for non-negative features.

    An example is predicted positive when ``w @ x > threshold``; the threshold
    defaults to the number of weights, the usual WINNOW choice. With all
    weights positive and features non-negative a zero threshold would make
    every non-zero example positive, so learning could never demote.

    ``init="ones"`` starts every weight at 1; ``init="random"`` uses the
    magnitudes of :func:`init_weights`.
    """
    if not alpha > 1:
        raise OutOfRange(f"alpha must exceed 1, got {alpha}")
    M, basis = unwrap(A)
    if np.any(M < 0):
        row, col = np.argwhere(M < 0)[0]
        raise NegativeFeature(f"feature {col} of example {row} is negative ({M[row, col]})")
    t = _binary_targets(t, M.shape[0])
    m = M.shape[1]
    if w0 is not None:
        w = _start(w0, m, cfg.seed)
        if np.any(w <= 0):
            raise OutOfRange("WINNOW weights must start positive")
    elif init == "ones":
        w = np.ones(m)
    elif init == "random":
        w = np.abs(init_weights(m, cfg.seed))
    else:
        raise OutOfRange(f"init must be 'ones' or 'random', got {init!r}")
    level = float(m if threshold is None else threshold)
    w, passes, converged, h_it, h_loss, h_err, w_min = _kernels.winnow_passes(
        M, t, w, float(alpha), level, cfg.max_iter, _stride(cfg.max_iter)
    )
    final = int(np.sum((M @ w > level).astype(np.float64) != t))
    report = TrainReport(
        converged=bool(converged),
        iterations=int(passes),
        final_misclassified=final,
        loss_history=[float(v) for v in h_loss],
        stop_reason="all_correct" if converged else "max_iter",
        history_iterations=[int(v) for v in h_it],
        misclassified_history=[int(v) for v in h_err],
        min_weight=float(w_min),
    )
    return LinearModel(w, basis, gamma=0.0, threshold=level), report


def gradient_train(A, t, cfg: TrainConfig = TrainConfig(), w0=None
                   ) -> tuple[LinearModel, TrainReport]:
    """Full-batch gradient iteration on the regularized least-squares functional.

    Stops when ``||G|| <= theta`` (gradient_small), when ``||G||`` exceeds
    1e3 times its smallest value so far (grad_exploded), when
    ``||w_k - w_{k-1}|| <= theta*||w_k||`` (weights_stabilized), or after
    ``max_iter`` updates.
    """
    M, basis = unwrap(A)
    t = as_vector(t, "t")
    if t.shape[0] != M.shape[0]:
        raise DimensionMismatch(f"t has length {t.shape[0]}, A has {M.shape[0]} rows")
    w = _start(w0, M.shape[1], cfg.seed)
    step = -cfg.eta if cfg.reg_sign == DESCENT else cfg.eta
    stride = _stride(cfg.max_iter)

    h_it: list[int] = []
    h_loss: list[float] = []
    h_err: list[int] = []

    def record(k, loss):
        h_it.append(k)
        h_loss.append(loss)
        h_err.append(int(np.sum((M @ w >= 0.5) != t)))

    g_min = math.inf
    k = 0
    reason = "max_iter"
    while True:
        loss, grad = loss_and_gradient(M, t, w, cfg.gamma)
        g = float(np.linalg.norm(grad))
        if k % stride == 0:
            record(k, loss)
        if g <= cfg.theta:
            reason = "gradient_small"
            break
        if not math.isfinite(g) or g > GROWTH_FACTOR * g_min:
            reason = "grad_exploded"
            break
        g_min = min(g_min, g)
        if k >= cfg.max_iter:
            break
        w_next = w + step * grad
        k += 1
        if not np.all(np.isfinite(w_next)):
            reason = "grad_exploded"
            break
        moved = float(np.linalg.norm(w_next - w))
        w = w_next
        if moved <= cfg.theta * float(np.linalg.norm(w)):
            reason = "weights_stabilized"
            break
    if not h_it or h_it[-1] != k:
        if np.all(np.isfinite(w)):
            record(k, loss_and_gradient(M, t, w, cfg.gamma)[0])
    model = LinearModel(w, basis, gamma=cfg.gamma, threshold=0.5)
    final = int(np.sum(classify_rows(model, M) != t)) if np.all(np.isfinite(w)) else M.shape[0]
    report = TrainReport(
        converged=reason in CONVERGED_REASONS,
        iterations=k,
        final_misclassified=final,
        loss_history=h_loss,
        stop_reason=reason,
        history_iterations=h_it,
        misclassified_history=h_err,
    )
    return model, report


def misclassified_residual(omega, A, t_pm) -> float:
    """``-sum(t_i * w @ x_i)`` over the examples whose sign disagrees with ``t_i``.

    Targets use the +/-1 encoding. The result is non-negative by construction.
    """
    M, _ = unwrap(A)
    w = as_vector(omega, "omega")
    t = as_vector(t_pm, "t_pm")
    if w.shape[0] != M.shape[1] or t.shape[0] != M.shape[0]:
        raise DimensionMismatch("omega, A and t_pm have inconsistent shapes")
    if not np.all(np.abs(t) == 1.0):
        raise OutOfRange("t_pm entries must be -1 or +1")
    margin = t * (M @ w)
    wrong = margin <= 0.0
    return float(-np.sum(margin[wrong]))


@dataclass(frozen=True)
class QuadraticBoundary:
    """Zero set of ``w0 + w1*x1 + w2*x2 + w3*x1^2 + w4*x1*x2 + w5*x2^2``."""

    w: tuple

    def __init__(self, w):
        arr = as_vector(w, "w")
        if arr.shape[0] != 6:
            raise DimensionMismatch(f"a quadratic boundary has 6 weights, got {arr.shape[0]}")
        object.__setattr__(self, "w", tuple(float(v) for v in arr))

    def __call__(self, x1: float, x2: float) -> float:
        w0, w1, w2, w3, w4, w5 = self.w
        return w0 + w1 * x1 + w2 * x2 + w3 * x1 * x1 + w4 * x1 * x2 + w5 * x2 * x2

    def coefficients(self, x1: float) -> tuple[float, float, float]:
        """(a, b, c) of ``a*x2^2 + b*x2 + c`` at fixed ``x1``."""
        w0, w1, w2, w3, w4, w5 = self.w
        return w5, w2 + w4 * x1, w0 + w1 * x1 + w3 * x1 * x1

    def roots(self, x1: float) -> tuple[float, ...]:
        return boundary_roots(self, x1)


_DEGENERATE = 1e-12


def boundary_roots(qb, x1: float) -> tuple[float, ...]:
    """Real x2 solving the quadratic boundary at ``x1``, in ascending order.

    Zero roots when the discriminant is negative (or the equation is
    degenerate), one when it vanishes or the quadratic term is below 1e-12.
    """
    if not isinstance(qb, QuadraticBoundary):
        qb = QuadraticBoundary(qb)
    a, b, c = qb.coefficients(float(x1))
    if abs(a) < _DEGENERATE:
        if abs(b) < _DEGENERATE:
            return ()
        return (-c / b,)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return ()
    if disc == 0.0:
        return (-b / (2.0 * a),)
    # cancellation-free form of (-b +/- sqrt(D)) / 2a
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    return tuple(sorted((q / a, c / q)))
