"""Plot-ready decision boundaries for fitted models."""

from __future__ import annotations

import csv
import warnings

import numpy as np

from .errors import DegenerateLine
from .features import LINEAR2D, POLYNOMIAL, QUADRATIC2D
from .lsq import LinearModel
from .online import QuadraticBoundary, boundary_roots

_FLAT = 1e-12


def linear_boundary(model: LinearModel, x_range, y_range=None) -> tuple[list[str], list[tuple]]:
    """Two endpoints of ``w0 + w1*x + w2*y = threshold`` across ``x_range``.

    A vertical line (``w2`` ~ 0) is returned as two points at constant x
    spanning ``y_range`` (defaults to ``x_range``), with a
    :class:`DegenerateLine` warning.
    """
    w0, w1, w2 = (float(v) for v in model.weights)
    level = model.threshold - w0
    x_lo, x_hi = x_range
    if abs(w2) >= _FLAT:
        rows = [(x, (level - w1 * x) / w2) for x in (x_lo, x_hi)]
        return ["x", "y"], rows
    y_lo, y_hi = y_range if y_range is not None else x_range
    if abs(w1) >= _FLAT:
        x_c = level / w1
        warnings.warn(f"boundary is the vertical line x = {x_c!r}", DegenerateLine, stacklevel=2)
        return ["x", "y"], [(x_c, y_lo), (x_c, y_hi)]
    warnings.warn("model has no x/y dependence; boundary is empty", DegenerateLine, stacklevel=2)
    return ["x", "y"], []


def quadratic_boundary(model: LinearModel, x_range, samples: int = 101) -> tuple[list[str], list[tuple]]:
    """Rows ``(x1, root_a[, root_b])`` of the conic boundary over an x1 grid.

    Grid points with no real root are left out.
    """
    w = np.array(model.weights, dtype=np.float64)
    w[0] -= model.threshold
    qb = QuadraticBoundary(w)
    rows = []
    for x1 in np.linspace(x_range[0], x_range[1], samples):
        roots = boundary_roots(qb, float(x1))
        if roots:
            rows.append((float(x1), *roots))
    if not rows:
        warnings.warn("no real boundary points over the requested x1 range", RuntimeWarning, stacklevel=2)
    return ["x1", "x2_a", "x2_b"], rows


def polynomial_curve(model: LinearModel, x_range, samples: int = 101) -> tuple[list[str], list[tuple]]:
    """The fitted polynomial ``f(x)`` sampled over ``x_range``."""
    xs = np.linspace(x_range[0], x_range[1], samples)
    A = model.basis.expand(xs)
    return ["x", "f"], [(float(x), float(v)) for x, v in zip(xs, A @ model.weights)]


def boundary_rows(model: LinearModel, x_range, samples: int = 101, y_range=None):
    kind = model.basis.kind if model.basis is not None else None
    if kind == LINEAR2D:
        return linear_boundary(model, x_range, y_range)
    if kind == QUADRATIC2D:
        return quadratic_boundary(model, x_range, samples)
    if kind == POLYNOMIAL:
        return polynomial_curve(model, x_range, samples)
    raise ValueError(f"no planar boundary for basis {model.basis}")


def write_boundary_csv(header, rows, path) -> None:
    width = len(header)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            cells = [repr(float(v)) for v in row]
            writer.writerow(cells + [""] * (width - len(cells)))
