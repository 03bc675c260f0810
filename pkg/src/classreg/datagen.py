"""Synthetic two-class datasets, CSV ingestion and grid-field segmentation."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import EmptyGrid, MissingColumn, OutOfRange, ParseError

LINE_INTERCEPT = 1.2
LINE_SLOPE = -0.5


@dataclass
class Dataset:
    features: np.ndarray
    targets: np.ndarray
    column_names: tuple[str, ...]
    skipped: int = 0
    label_name: str = "label"

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim == 1:
            self.features = self.features.reshape(-1, 1)
        self.targets = np.asarray(self.targets, dtype=np.int64)
        self.column_names = tuple(self.column_names)
        if self.targets.shape[0] != self.features.shape[0]:
            raise ValueError("features and targets have different lengths")
        if len(self.column_names) != self.features.shape[1]:
            raise ValueError("one column name per feature column is required")
        if not np.all((self.targets == 0) | (self.targets == 1)):
            raise ValueError("targets must be 0 or 1")

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def class_counts(self) -> tuple[int, int]:
        ones = int(self.targets.sum())
        return len(self) - ones, ones


@dataclass(frozen=True)
class NoiseSpec:
    delta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise OutOfRange(f"noise level delta must lie in [0, 1], got {self.delta}")


def line_y(x):
    return LINE_INTERCEPT + LINE_SLOPE * np.asarray(x)


def gen_linear_two_class(n: int, x_lo: float = -2.0, x_hi: float = 2.0,
                         noise: NoiseSpec = NoiseSpec(), jitter: float = 1.0) -> Dataset:
    """Points scattered about the line y = 1.2 - 0.5x, labelled by which side they fall on.

    ``y = line(x) * (1 + delta*alpha) + jitter*u`` with alpha and u uniform on
    (-1, 1); the label is 1 when ``y - 1.2 + 0.5x > 0``. Without the jitter
    every point would sit on the line and be labelled 0.
    """
    if n < 2:
        raise OutOfRange(f"need at least 2 points, got {n}")
    if not x_lo < x_hi:
        raise OutOfRange(f"x_lo must be below x_hi, got [{x_lo}, {x_hi}]")
    if jitter < 0:
        raise OutOfRange(f"jitter must be non-negative, got {jitter}")
    rng = np.random.default_rng(noise.seed)
    x = rng.uniform(x_lo, x_hi, n)
    alpha = rng.uniform(-1.0, 1.0, n)
    u = rng.uniform(-1.0, 1.0, n)
    y = line_y(x) * (1.0 + noise.delta * alpha) + jitter * u
    t = (y - LINE_INTERCEPT - LINE_SLOPE * x > 0).astype(np.int64)
    return Dataset(np.column_stack([x, y]), t, ("x", "y"))


def gen_circle_two_class(n: int, r_inner: float = 1.0, r_outer: float = 3.0, seed: int = 0) -> Dataset:
    """Disk of radius ``r_inner`` (class 1) inside a ring at ``r_outer`` +/- 10% (class 0).

    Class 1 gets ``n // 2`` points, class 0 the rest; rows are shuffled.
    """
    if n < 2:
        raise OutOfRange(f"need at least 2 points, got {n}")
    if not 0 < r_inner < 0.9 * r_outer:
        raise OutOfRange(
            f"need 0 < r_inner < 0.9*r_outer so the ring clears the disk, got {r_inner}, {r_outer}"
        )
    rng = np.random.default_rng(seed)
    n_in = n // 2
    n_out = n - n_in
    r_in = r_inner * np.sqrt(rng.uniform(0.0, 1.0, n_in))
    a_in = rng.uniform(0.0, 2 * math.pi, n_in)
    r_out = rng.uniform(0.9 * r_outer, 1.1 * r_outer, n_out)
    a_out = rng.uniform(0.0, 2 * math.pi, n_out)
    r = np.concatenate([r_in, r_out])
    a = np.concatenate([a_in, a_out])
    t = np.concatenate([np.ones(n_in, dtype=np.int64), np.zeros(n_out, dtype=np.int64)])
    order = rng.permutation(n)
    pts = np.column_stack([r * np.cos(a), r * np.sin(a)])
    return Dataset(pts[order], t[order], ("x1", "x2"))


def gen_gaussian_two_class(n: int, separation: float = 1.0, sigma: float = 1.0, seed: int = 0) -> Dataset:
    """Two isotropic Gaussian clouds centred ``separation`` apart on the x1 axis.

    With separation comparable to sigma the classes overlap and no line
    separates them.
    """
    if n < 2:
        raise OutOfRange(f"need at least 2 points, got {n}")
    if not sigma > 0:
        raise OutOfRange(f"sigma must be positive, got {sigma}")
    rng = np.random.default_rng(seed)
    n1 = n // 2
    t = np.concatenate([np.ones(n1, dtype=np.int64), np.zeros(n - n1, dtype=np.int64)])
    centre = np.where(t[:, None] == 1, [separation / 2, 0.0], [-separation / 2, 0.0])
    pts = centre + sigma * rng.standard_normal((n, 2))
    order = rng.permutation(n)
    return Dataset(pts[order], t[order], ("x1", "x2"))


def gen_boolean(n: int, n_attributes: int = 4, target_attribute: int = 0) -> Dataset:
    """All 0/1 attribute patterns, cycled to ``n`` rows; label = one attribute."""
    if n < 1:
        raise OutOfRange(f"need at least 1 row, got {n}")
    if not 0 <= target_attribute < n_attributes:
        raise OutOfRange(f"target attribute {target_attribute} outside 0..{n_attributes - 1}")
    codes = np.arange(n) % (2 ** n_attributes)
    bits = (codes[:, None] >> np.arange(n_attributes)[None, :]) & 1
    names = tuple(f"a{i + 1}" for i in range(n_attributes))
    return Dataset(bits.astype(np.float64), bits[:, target_attribute], names)


def bump_field(n: int, peak: float = 8.0, width: float = 0.2) -> np.ndarray:
    """n x n samples of ``peak * exp(-r^2 / (2 width^2))`` centred on the unit square."""
    if n < 2:
        raise OutOfRange(f"grid needs at least 2 nodes per side, got {n}")
    s = np.linspace(0.0, 1.0, n)
    xx, yy = np.meshgrid(s, s)
    r2 = (xx - 0.5) ** 2 + (yy - 0.5) ** 2
    return peak * np.exp(-r2 / (2 * width ** 2))


def segment_field(values, threshold: float = 4.0) -> Dataset:
    """Turn a grid of values into points on the unit square, class 1 where value > threshold.

    Node (row i, column j) of an n-row, m-column grid maps to
    ``(j/(m-1), i/(n-1))``.
    """
    grid = np.asarray(values, dtype=np.float64)
    if grid.size == 0:
        raise EmptyGrid("field has no values")
    if grid.ndim != 2:
        raise EmptyGrid(f"field must be a 2-D grid, got shape {grid.shape}")
    rows, cols = grid.shape
    ys = np.arange(rows) / (rows - 1) if rows > 1 else np.zeros(1)
    xs = np.arange(cols) / (cols - 1) if cols > 1 else np.zeros(1)
    xx, yy = np.meshgrid(xs, ys)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    t = (grid.ravel() > threshold).astype(np.int64)
    return Dataset(pts, t, ("x1", "x2"))


def load_field(path) -> np.ndarray:
    """Read a headerless CSV of numbers, one grid row per line."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(not c.strip() for c in rec):
                continue
            try:
                rows.append([float(c) for c in rec])
            except ValueError:
                raise ParseError(f"non-numeric field value in {rec!r}", lineno) from None
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(f"expected {len(rows[0])} values, got {len(rows[-1])}", lineno)
    if not rows:
        raise EmptyGrid(f"{path} holds no grid values")
    return np.array(rows)


def write_field(values, path) -> None:
    grid = np.asarray(values, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in grid:
            writer.writerow([repr(float(v)) for v in row])


def write_csv(dataset: Dataset, path) -> None:
    """Header row, then one row per example; floats in shortest round-trip form.

    ``path`` may also be an open text stream.
    """
    if hasattr(path, "write"):
        _dump_csv(dataset, path)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _dump_csv(dataset, fh)


def _dump_csv(dataset: Dataset, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([*dataset.column_names, dataset.label_name])
    for row, label in zip(dataset.features, dataset.targets):
        writer.writerow([*(repr(float(v)) for v in row), int(label)])


def _map_label(raw: str, label_map, label_threshold):
    if label_threshold is not None:
        return int(float(raw) > label_threshold)
    if label_map is not None:
        return label_map.get(raw)
    try:
        value = float(raw)
    except ValueError:
        return None
    return int(value) if value in (0.0, 1.0) else None


def load_csv(path, feature_columns=None, label_column: str = "label",
             label_map: dict | None = None, label_threshold: float | None = None) -> Dataset:
    """Read a headed CSV into a :class:`Dataset`.

    Parameters
    ----------
    feature_columns : sequence of str, optional
        Columns used as features, in this order. Defaults to every column
        except the label column.
    label_column : str
        Column holding the class.
    label_map : dict, optional
        Raw label string to 0/1. Rows whose label is not in the map are
        skipped and counted in ``Dataset.skipped``. Without a map the label
        must already read as 0 or 1.
    label_threshold : float, optional
        Derive the class from a numeric column instead: 1 when the value
        exceeds the threshold.

    Raises
    ------
    ParseError
        Empty file, wrong field count or a non-numeric feature (with the line
        number).
    MissingColumn
        A requested column is not in the header.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or not any(h.strip() for h in header):
            raise ParseError(f"{path} is empty", 1)
        header = [h.strip() for h in header]
        if label_column not in header:
            raise MissingColumn(f"label column {label_column!r} not in header {header}")
        if feature_columns is None:
            feature_columns = [h for h in header if h != label_column]
        feature_columns = list(feature_columns)
        for name in feature_columns:
            if name not in header:
                raise MissingColumn(f"feature column {name!r} not in header {header}")
        f_idx = [header.index(c) for c in feature_columns]
        l_idx = header.index(label_column)

        feats, labels, skipped = [], [], 0
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(rec)}", lineno)
            try:
                label = _map_label(rec[l_idx].strip(), label_map, label_threshold)
            except ValueError:
                raise ParseError(f"label {rec[l_idx]!r} is not numeric", lineno) from None
            if label is None:
                skipped += 1
                continue
            if label not in (0, 1):
                raise ParseError(f"label {rec[l_idx]!r} maps to {label}, not 0 or 1", lineno)
            try:
                feats.append([float(rec[i]) for i in f_idx])
            except ValueError:
                raise ParseError(f"non-numeric feature in {rec!r}", lineno) from None
            labels.append(label)

    features = np.array(feats, dtype=np.float64).reshape(len(feats), len(feature_columns))
    return Dataset(features, np.array(labels, dtype=np.int64), tuple(feature_columns),
                   skipped=skipped, label_name=label_column)


def fixture_path(name: str) -> Path:
    """Path of a bundled dataset (``iris.csv`` or ``seals.csv``)."""
    return Path(str(resources.files("classreg") / "fixtures" / name))


def load_iris(features=("petal_length", "petal_width"), positive: str = "setosa",
              negative: tuple[str, ...] = ("versicolor", "virginica")) -> Dataset:
    """Bundled Iris data as a two-class problem (``positive`` vs ``negative``)."""
    label_map = {positive: 1, **{name: 0 for name in negative}}
    return load_csv(fixture_path("iris.csv"), list(features), "species", label_map)
