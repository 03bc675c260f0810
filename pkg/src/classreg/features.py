"""Design matrices built from raw inputs.

Three bases are supported, named as on the command line:

``poly:<d>``
    Vandermonde columns ``1, x, ..., x**(d-1)`` of a scalar input. ``d`` counts
    basis functions, so the highest power is ``d - 1``.
``linear2d``
    Rows ``(1, x, y)``.
``quad2d``
    Rows ``(1, x1, x2, x1**2, x1*x2, x2**2)``.

``linear:<k>`` (bias plus ``k`` raw coordinates) generalises ``linear2d`` to
the boolean-attribute data WINNOW is usually run on.

Weights are always stored bias first, in the column order above.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegreeZero, DimensionMismatch, NonFiniteInput

POLYNOMIAL = "poly"
LINEAR2D = "linear2d"
QUADRATIC2D = "quad2d"
LINEAR = "linear"


@dataclass(frozen=True)
class BasisSpec:
    kind: str
    size: int = 0  # polynomial: number of basis functions; linear: raw dimension

    def __post_init__(self):
        if self.kind == POLYNOMIAL and self.size < 1:
            raise DegreeZero(f"polynomial basis needs degree >= 1, got {self.size}")
        if self.kind == LINEAR and self.size < 1:
            raise ValueError(f"linear basis needs at least one raw coordinate, got {self.size}")
        if self.kind not in (POLYNOMIAL, LINEAR2D, QUADRATIC2D, LINEAR):
            raise ValueError(f"unknown basis kind {self.kind!r}")

    @classmethod
    def polynomial(cls, degree: int) -> "BasisSpec":
        return cls(POLYNOMIAL, int(degree))

    @classmethod
    def linear2d(cls) -> "BasisSpec":
        return cls(LINEAR2D)

    @classmethod
    def quadratic2d(cls) -> "BasisSpec":
        return cls(QUADRATIC2D)

    @classmethod
    def linear(cls, raw_dim: int) -> "BasisSpec":
        """Bias plus ``raw_dim`` coordinates; collapses to ``linear2d`` for 2-D input."""
        if raw_dim == 2:
            return cls.linear2d()
        return cls(LINEAR, int(raw_dim))

    @classmethod
    def parse(cls, name: str) -> "BasisSpec":
        name = name.strip().lower()
        if name == LINEAR2D:
            return cls.linear2d()
        if name == QUADRATIC2D:
            return cls.quadratic2d()
        kind, sep, arg = name.partition(":")
        if sep and kind in (POLYNOMIAL, LINEAR):
            try:
                size = int(arg)
            except ValueError:
                raise ValueError(f"bad basis size in {name!r}") from None
            return cls.polynomial(size) if kind == POLYNOMIAL else cls.linear(size)
        raise ValueError(f"unknown basis {name!r}; expected poly:<d>, linear2d, quad2d or linear:<k>")

    @property
    def name(self) -> str:
        if self.kind in (POLYNOMIAL, LINEAR):
            return f"{self.kind}:{self.size}"
        return self.kind

    @property
    def raw_dim(self) -> int:
        if self.kind == POLYNOMIAL:
            return 1
        if self.kind == LINEAR:
            return self.size
        return 2

    @property
    def n_columns(self) -> int:
        if self.kind == POLYNOMIAL:
            return self.size
        if self.kind == QUADRATIC2D:
            return 6
        return self.raw_dim + 1

    def expand(self, points) -> np.ndarray:
        """Feature matrix for ``points`` (N raw rows) without the wrapper."""
        if self.kind == POLYNOMIAL:
            return _vandermonde(_as_scalars(points), self.size)
        pts = _as_points(points, self.raw_dim)
        if self.kind == QUADRATIC2D:
            return _lift(pts)
        return np.hstack([np.ones((pts.shape[0], 1)), pts])

    def design(self, points) -> "DesignMatrix":
        return DesignMatrix(self.expand(points), self)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class DesignMatrix:
    matrix: np.ndarray
    basis: BasisSpec

    @property
    def raw_dim(self) -> int:
        return self.basis.raw_dim

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def _as_scalars(xs) -> np.ndarray:
    arr = np.asarray(xs, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    arr = np.atleast_1d(arr)
    if arr.ndim != 1:
        raise DimensionMismatch(f"polynomial basis takes scalar inputs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("inputs contain NaN or Inf")
    return arr


def _as_points(points, dim: int) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1 and arr.shape[0] == dim:
        arr = arr.reshape(1, dim)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimensionMismatch(f"expected points of dimension {dim}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("inputs contain NaN or Inf")
    return arr


def _vandermonde(xs: np.ndarray, d: int) -> np.ndarray:
    out = np.empty((xs.shape[0], d))
    out[:, 0] = 1.0
    for j in range(1, d):
        out[:, j] = out[:, j - 1] * xs
    return out


def _lift(pts: np.ndarray) -> np.ndarray:
    x1, x2 = pts[:, 0], pts[:, 1]
    return np.column_stack([np.ones_like(x1), x1, x2, x1 * x1, x1 * x2, x2 * x2])


def polynomial_design(xs, degree: int) -> DesignMatrix:
    """Vandermonde design matrix with ``degree`` columns, entry (i, j) = xs[i]**j."""
    basis = BasisSpec.polynomial(degree)
    xs = _as_scalars(xs)
    if xs.shape[0] < degree:
        warnings.warn(
            f"{xs.shape[0]} points for {degree} basis functions: the normal equations will be singular",
            stacklevel=2,
        )
    return DesignMatrix(_vandermonde(xs, degree), basis)


def linear2d_design(points) -> DesignMatrix:
    return BasisSpec.linear2d().design(points)


def linear_design(points) -> DesignMatrix:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array of points, got shape {pts.shape}")
    return BasisSpec.linear(pts.shape[1]).design(pts)


def quadratic_lift(points) -> DesignMatrix:
    """Map each (x1, x2) to (1, x1, x2, x1^2, x1*x2, x2^2)."""
    return BasisSpec.quadratic2d().design(points)
