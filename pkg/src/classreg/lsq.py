"""Least-squares classification through the normal equations.

All fits minimise ``0.5*||A w - t||^2 + 0.5*gamma*||w||^2``; ``gamma = 0`` is
plain least squares. The identity is added unscaled (no factor of N).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonPositiveGamma, NotPositiveDefinite, RankDeficient
from .features import BasisSpec, DesignMatrix
from .linalg import as_matrix, as_vector, cho_solve, cholesky, gram

DEFAULT_THRESHOLD = 0.5


@dataclass
class LinearModel:
    """Weights (bias first) plus the basis that turns raw points into features.

    ``threshold`` is the decision level: a point is class 1 when
    ``w @ phi(x) >= threshold``. Least-squares models default to 0.5 (halfway
    between the 0/1 targets); perceptron-style models are stored with 0.
    """

    weights: np.ndarray
    basis: BasisSpec | None = None
    gamma: float = 0.0
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.basis is not None and self.weights.shape[0] != self.basis.n_columns:
            raise DimensionMismatch(
                f"{self.basis.name} needs {self.basis.n_columns} weights, got {self.weights.shape[0]}"
            )

    def to_dict(self) -> dict:
        if self.basis is None:
            raise ValueError("a model without a basis cannot be serialized")
        return {
            "basis": self.basis.name,
            "weights": [float(w) for w in self.weights],
            "gamma": float(self.gamma),
            "threshold": float(self.threshold),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "LinearModel":
        try:
            return cls(
                weights=np.asarray(doc["weights"], dtype=np.float64),
                basis=BasisSpec.parse(doc["basis"]),
                gamma=float(doc.get("gamma", 0.0)),
                threshold=float(doc.get("threshold", DEFAULT_THRESHOLD)),
            )
        except KeyError as exc:
            raise ValueError(f"model document lacks field {exc.args[0]!r}") from None

    @classmethod
    def from_json(cls, text: str) -> "LinearModel":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FitDiagnostics:
    residual_norm: float
    weight_norm: float
    gamma: float = 0.0


def unwrap(A) -> tuple[np.ndarray, BasisSpec | None]:
    if isinstance(A, DesignMatrix):
        return as_matrix(A.matrix, "A"), A.basis
    return as_matrix(A, "A"), None


def _check_targets(M: np.ndarray, t) -> np.ndarray:
    t = as_vector(t, "t")
    if t.shape[0] != M.shape[0]:
        raise DimensionMismatch(f"t has length {t.shape[0]}, A has {M.shape[0]} rows")
    return t


def _diagnostics(M, t, w, gamma) -> FitDiagnostics:
    return FitDiagnostics(
        residual_norm=float(np.linalg.norm(M @ w - t)),
        weight_norm=float(np.linalg.norm(w)),
        gamma=float(gamma),
    )


def fit_ls(A, t) -> tuple[LinearModel, FitDiagnostics]:
    """Solve the normal equations ``A^T A w = A^T t`` by Cholesky.

    Raises
    ------
    RankDeficient
        If the columns of ``A`` are linearly dependent (``A^T A`` is then
        not positive definite).
    """
    M, basis = unwrap(A)
    t = _check_targets(M, t)
    if M.shape[0] < M.shape[1]:
        raise RankDeficient(f"{M.shape[0]} rows cannot determine {M.shape[1]} weights")
    try:
        L = cholesky(gram(M))
    except NotPositiveDefinite as exc:
        raise RankDeficient(f"design matrix columns are linearly dependent ({exc})") from exc
    w = cho_solve(L, M.T @ t)
    return LinearModel(w, basis, gamma=0.0), _diagnostics(M, t, w, 0.0)


def fit_ridge(A, t, gamma: float) -> tuple[LinearModel, FitDiagnostics]:
    """Solve ``(A^T A + gamma I) w = A^T t``; solvable for any ``A`` when gamma > 0."""
    if not gamma > 0:
        raise NonPositiveGamma(f"gamma must be positive, got {gamma}")
    M, basis = unwrap(A)
    t = _check_targets(M, t)
    H = gram(M)
    H[np.diag_indices_from(H)] += gamma
    w = cho_solve(cholesky(H), M.T @ t)
    return LinearModel(w, basis, gamma=float(gamma)), _diagnostics(M, t, w, gamma)


def pseudo_inverse_fit(A, t) -> LinearModel:
    """``w = (A^T A)^{-1} A^T t`` with the inverse assembled column by column.

    Kept separate from :func:`fit_ls` (which never forms an inverse) so the two
    can check each other.
    """
    M, basis = unwrap(A)
    t = _check_targets(M, t)
    try:
        L = cholesky(gram(M))
    except NotPositiveDefinite as exc:
        raise RankDeficient(f"design matrix columns are linearly dependent ({exc})") from exc
    m = M.shape[1]
    inv = np.empty((m, m))
    for j in range(m):
        e = np.zeros(m)
        e[j] = 1.0
        inv[:, j] = cho_solve(L, e)
    pinv = inv @ M.T
    return LinearModel(pinv @ t, basis, gamma=0.0)


def _features(model: LinearModel, raw_point) -> np.ndarray:
    if model.basis is None:
        phi = as_vector(raw_point, "point")
    else:
        raw = np.asarray(raw_point, dtype=np.float64)
        if raw.size != model.basis.raw_dim:
            raise DimensionMismatch(
                f"{model.basis.name} expects {model.basis.raw_dim} coordinates, got {raw.size}"
            )
        phi = model.basis.expand(raw.reshape(1, -1) if model.basis.raw_dim > 1 else raw.reshape(1))[0]
    if phi.shape[0] != model.weights.shape[0]:
        raise DimensionMismatch(f"{phi.shape[0]} features for {model.weights.shape[0]} weights")
    return phi


def predict(model: LinearModel, raw_point) -> float:
    return float(model.weights @ _features(model, raw_point))


def classify(model: LinearModel, raw_point, threshold: float | None = None) -> int:
    """1 if the prediction reaches ``threshold`` (ties go to class 1), else 0."""
    level = model.threshold if threshold is None else threshold
    return int(predict(model, raw_point) >= level)


def classify_rows(model: LinearModel, M: np.ndarray, threshold: float | None = None) -> np.ndarray:
    """Vectorized :func:`classify` over the rows of a feature matrix."""
    level = model.threshold if threshold is None else threshold
    return (M @ model.weights >= level).astype(np.int64)


def loss_and_gradient(A, t, omega, gamma: float = 0.0) -> tuple[float, np.ndarray]:
    """Value and gradient of ``0.5*||t - A w||^2 + 0.5*gamma*||w||^2``.

    The gradient is ``-A^T (t - A w) + gamma * w``.
    """
    M, _ = unwrap(A)
    t = _check_targets(M, t)
    w = as_vector(omega, "omega")
    if w.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"omega has length {w.shape[0]}, A has {M.shape[1]} columns")
    if gamma < 0:
        raise NonPositiveGamma(f"gamma must be non-negative, got {gamma}")
    r = t - M @ w
    loss = 0.5 * float(r @ r) + 0.5 * gamma * float(w @ w)
    grad = -(M.T @ r) + gamma * w
    return loss, grad
