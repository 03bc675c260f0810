"""Dense linear algebra backing the normal equations.

Vectors and matrices are plain float64 ndarrays. Every entry point rejects
NaN/Inf input with :class:`~classreg.errors.NonFiniteInput`.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, NonFiniteInput, NotPositiveDefinite

#: Relative pivot tolerance: a pivot <= PIVOT_EPS * max|M| is treated as zero.
PIVOT_EPS = 1e-14
#: Relative asymmetry accepted by :func:`cholesky`.
SYMMETRY_RTOL = 1e-12


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return arr


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(M, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{name} must have at least one row and column")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return np.ascontiguousarray(arr)


def gram(A) -> np.ndarray:
    """Return ``A.T @ A`` with bitwise-exact symmetry.

    The upper triangle is computed and mirrored, so the result can be fed to
    :func:`cholesky` without tripping its symmetry check on rounding noise.
    """
    A = as_matrix(A, "A")
    upper = np.triu(A.T @ A)
    return upper + np.triu(upper, 1).T


def _check_square_symmetric(M: np.ndarray) -> None:
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got shape {M.shape}")
    scale = np.max(np.abs(M))
    if np.max(np.abs(M - M.T)) > SYMMETRY_RTOL * max(scale, np.finfo(float).tiny):
        raise ValueError("matrix is not symmetric")


def cholesky(M) -> np.ndarray:
    """Lower-triangular factor ``L`` with ``L @ L.T == M``.

    Raises
    ------
    NotPositiveDefinite
        If a pivot is <= ``PIVOT_EPS * max|M|``. For a Gram matrix this means
        the underlying design matrix has linearly dependent columns.
    """
    M = as_matrix(M, "M")
    _check_square_symmetric(M)
    tol = PIVOT_EPS * float(np.max(np.abs(M)))
    L, fail = _kernels.cholesky(M, tol)
    if fail >= 0:
        raise NotPositiveDefinite(
            f"pivot {fail} is not positive (tolerance {tol:.3e})", pivot_index=int(fail)
        )
    return L


def cho_solve(L: np.ndarray, b) -> np.ndarray:
    """Solve ``L L^T x = b`` given the factor from :func:`cholesky`."""
    b = as_vector(b, "b")
    if b.shape[0] != L.shape[0]:
        raise DimensionMismatch(f"b has length {b.shape[0]}, expected {L.shape[0]}")
    return _kernels.backward_t(L, _kernels.forward(L, b))


def solve_spd(M, b) -> np.ndarray:
    """Solve the symmetric positive definite system ``M x = b``."""
    M = as_matrix(M, "M")
    b = as_vector(b, "b")
    if b.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"b has length {b.shape[0]}, expected {M.shape[1]}")
    return cho_solve(cholesky(M), b)


def is_positive_definite(M) -> bool:
    try:
        cholesky(M)
    except NotPositiveDefinite:
        return False
    return True
