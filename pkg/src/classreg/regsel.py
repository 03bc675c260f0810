"""Choosing the Tikhonov parameter gamma for the ridge classifier.

Everything is built on the value function of

    J_gamma(w) = 0.5*||A w - t||^2 + 0.5*gamma*||w - w0||^2,

whose minimiser solves ``(A^T A + gamma I) w = A^T t + gamma w0``. At that
minimiser ``phi_bar = 0.5*||A w - t||^2`` (non-decreasing in gamma) and
``psi_bar = 0.5*||w - w0||^2`` (non-increasing), and
``F = phi_bar + gamma*psi_bar`` with ``dF/dgamma = psi_bar``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketInvalid, DegenerateIterate, DimensionMismatch, NonPositiveGamma, OutOfRange
from .linalg import as_vector, cho_solve, cholesky, gram
from .lsq import unwrap

APRIORI = "apriori"
MOROZOV = "morozov"
BALANCING = "balancing"


@dataclass(frozen=True)
class ValuePoint:
    gamma: float
    F: float
    phi_bar: float
    psi_bar: float
    weights: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def discrepancy(self) -> float:
        """``||A w_gamma - t||``."""
        return math.sqrt(2.0 * self.phi_bar)


@dataclass
class RegSelection:
    rule: str
    gamma_star: float
    iterates: list[float]
    achieved: float = 0.0
    converged: bool = True
    trace: list[ValuePoint] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self.gamma_star > 0:
            raise ValueError(f"selected gamma must be positive, got {self.gamma_star}")
        if not self.iterates:
            raise ValueError("a selection needs at least one iterate")

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "gamma": float(self.gamma_star),
            "iterates": [float(g) for g in self.iterates],
            "achieved": float(self.achieved),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def write_trace_csv(self, path) -> None:
        write_trace_csv(self.trace, path)


def write_trace_csv(points, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["gamma", "F", "phi_bar", "psi_bar"])
        for p in points:
            writer.writerow([repr(p.gamma), repr(p.F), repr(p.phi_bar), repr(p.psi_bar)])


class TikhonovProblem:
    """Caches ``A^T A`` and ``A^T t`` so the value function is cheap to sweep."""

    def __init__(self, A, t, omega0=None):
        M, _ = unwrap(A)
        t = as_vector(t, "t")
        if t.shape[0] != M.shape[0]:
            raise DimensionMismatch(f"t has length {t.shape[0]}, A has {M.shape[0]} rows")
        m = M.shape[1]
        w0 = np.zeros(m) if omega0 is None else as_vector(omega0, "omega0")
        if w0.shape[0] != m:
            raise DimensionMismatch(f"omega0 has length {w0.shape[0]}, expected {m}")
        self.A = M
        self.t = t
        self.omega0 = w0
        self._gram = gram(M)
        self._rhs = M.T @ t

    def solve(self, gamma: float) -> np.ndarray:
        if not gamma > 0:
            raise NonPositiveGamma(f"gamma must be positive, got {gamma}")
        H = self._gram.copy()
        H[np.diag_indices_from(H)] += gamma
        return cho_solve(cholesky(H), self._rhs + gamma * self.omega0)

    def __call__(self, gamma: float) -> ValuePoint:
        w = self.solve(gamma)
        r = self.A @ w - self.t
        d = w - self.omega0
        phi = 0.5 * float(r @ r)
        psi = 0.5 * float(d @ d)
        return ValuePoint(float(gamma), phi + gamma * psi, phi, psi, w)


def value_function(A, t, gamma: float, omega0=None) -> ValuePoint:
    """Evaluate ``F(gamma) = min_w J_gamma(w)`` and its two parts."""
    return TikhonovProblem(A, t, omega0)(gamma)


def apriori_gamma(delta: float, C: float = 1.0, mu: float = 1.0) -> float:
    """``C * delta**mu``; for mu in (0, 2) both gamma and delta^2/gamma vanish as delta -> 0."""
    if not 0 < delta < 1:
        raise OutOfRange(f"delta must lie in (0, 1), got {delta}")
    if not C > 0:
        raise OutOfRange(f"C must be positive, got {C}")
    if not 0 < mu < 2:
        raise OutOfRange(f"mu must lie in (0, 2), got {mu}")
    return C * delta ** mu


def gamma_schedule(gamma0: float, p: float, k: int) -> float:
    """``gamma0 / (k + 1)**p``."""
    if not gamma0 > 0:
        raise OutOfRange(f"gamma0 must be positive, got {gamma0}")
    if not 0 < p <= 1:
        raise OutOfRange(f"p must lie in (0, 1], got {p}")
    if k < 0:
        raise OutOfRange(f"k must be non-negative, got {k}")
    return gamma0 / (k + 1) ** p


def apriori_select(delta: float, C: float = 1.0, mu: float = 1.0,
                   p: float | None = None, steps: int = 1) -> RegSelection:
    """A-priori choice, optionally followed by ``steps`` terms of the decaying schedule."""
    g = apriori_gamma(delta, C, mu)
    iterates = [g] if p is None else [gamma_schedule(g, p, k) for k in range(max(1, steps))]
    return RegSelection(APRIORI, iterates[-1], iterates, achieved=0.0)


def morozov_select(A, t, delta: float, c_m: float = 1.0, bracket=(1e-10, 1e10),
                   tol: float = 1e-6, omega0=None, max_iter: int = 300) -> RegSelection:
    """Find gamma with ``||A w_gamma - t|| = c_m * delta`` by bisection in log(gamma).

    The discrepancy is monotone in gamma, so bisection on a bracket that
    encloses the target always succeeds. Stops once the discrepancy is within
    ``tol`` of the target.

    Raises
    ------
    BracketInvalid
        If the target is not strictly between the discrepancies at the two
        bracket ends (for instance ``c_m * delta >= ||t||``, or data that the
        model fits exactly).
    """
    if not delta > 0:
        raise OutOfRange(f"delta must be positive, got {delta}")
    if not c_m >= 1:
        raise OutOfRange(f"c_m must be at least 1, got {c_m}")
    if not tol > 0:
        raise OutOfRange(f"tol must be positive, got {tol}")
    lo, hi = (float(b) for b in bracket)
    if not 0 < lo < hi:
        raise OutOfRange(f"bracket must satisfy 0 < lo < hi, got ({lo}, {hi})")
    problem = TikhonovProblem(A, t, omega0)
    target = c_m * delta
    p_lo, p_hi = problem(lo), problem(hi)
    trace = [p_lo, p_hi]
    if not p_lo.discrepancy < target < p_hi.discrepancy:
        raise BracketInvalid(
            f"target discrepancy {target:.6g} is not enclosed by "
            f"[{p_lo.discrepancy:.6g}, {p_hi.discrepancy:.6g}] on gamma in [{lo:.3g}, {hi:.3g}]"
        )
    iterates: list[float] = []
    best = None
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)
        point = problem(mid)
        trace.append(point)
        iterates.append(mid)
        err = point.discrepancy - target
        if best is None or abs(err) < abs(best.discrepancy - target):
            best = point
        if abs(err) <= tol:
            break
        if err < 0:
            lo = mid
        else:
            hi = mid
        if hi <= lo * (1 + 4 * np.finfo(float).eps):
            break
    return RegSelection(
        MOROZOV, best.gamma, iterates, achieved=best.discrepancy,
        converged=abs(best.discrepancy - target) <= tol, trace=trace,
    )


def balancing_fixed_point(A, t, gamma0: float = 1.0, C: float = 1.0, theta: float = 1e-3,
                          max_iter: int = 100, omega0=None) -> RegSelection:
    """Fixed-point iteration ``gamma <- phi_bar(gamma) / (C * psi_bar(gamma))``.

    A fixed point satisfies the balance ``phi_bar = C * gamma * psi_bar``;
    ``C = 1`` is the zero-crossing variant. Stops when
    ``|gamma_{k+1} - gamma_k| <= theta * gamma_k`` or after ``max_iter`` updates.
    The reported gamma is the last iterate at which the value function was
    evaluated, so the balance residual there is bounded by
    ``C * theta * gamma * psi_bar``.
    """
    if not gamma0 > 0:
        raise OutOfRange(f"gamma0 must be positive, got {gamma0}")
    if not C > 0:
        raise OutOfRange(f"C must be positive, got {C}")
    if not 0 < theta < 1:
        raise OutOfRange(f"theta must lie in (0, 1), got {theta}")
    if max_iter < 1:
        raise OutOfRange(f"max_iter must be at least 1, got {max_iter}")
    problem = TikhonovProblem(A, t, omega0)
    gamma = float(gamma0)
    iterates = [gamma]
    trace: list[ValuePoint] = []
    step = math.inf
    for _ in range(max_iter):
        point = problem(gamma)
        trace.append(point)
        if point.psi_bar == 0.0:
            raise DegenerateIterate(
                f"psi_bar vanished at gamma={gamma:.6g}: w_gamma equals omega0"
                + ("" if gamma == gamma0 else "; the iterates ran off to infinity, so phi_bar > "
                   "C*gamma*psi_bar may hold for every gamma (try a larger C)")
            )
        nxt = point.phi_bar / (C * point.psi_bar)
        if not nxt > 0:
            raise DegenerateIterate(f"phi_bar vanished at gamma={gamma:.6g}: the data are fitted exactly")
        iterates.append(nxt)
        step = abs(nxt - gamma)
        if step <= theta * gamma:
            return RegSelection(BALANCING, gamma, iterates, achieved=step, converged=True, trace=trace)
        gamma = nxt
    return RegSelection(BALANCING, gamma, iterates, achieved=step, converged=False, trace=trace)
