"""Reference computations that share no code with the package."""

import numpy as np


def gauss_solve(M, b):
    """Gaussian elimination with partial pivoting, written out by hand."""
    A = np.array(M, dtype=float)
    x = np.array(b, dtype=float)
    n = A.shape[0]
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if p != k:
            A[[k, p]] = A[[p, k]]
            x[[k, p]] = x[[p, k]]
        for i in range(k + 1, n):
            f = A[i, k] / A[k, k]
            A[i, k:] -= f * A[k, k:]
            x[i] -= f * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - A[k, k + 1:] @ x[k + 1:]) / A[k, k]
    return x


def matmul_loops(A, B):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    out = np.zeros((A.shape[0], B.shape[1]))
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            out[i, j] = sum(A[i, k] * B[k, j] for k in range(A.shape[1]))
    return out


def central_difference(f, w, rel_step=1e-6):
    w = np.asarray(w, dtype=float)
    g = np.empty_like(w)
    for i in range(w.size):
        h = rel_step * (1.0 + abs(w[i]))
        up = w.copy()
        dn = w.copy()
        up[i] += h
        dn[i] -= h
        g[i] = (f(up) - f(dn)) / (2.0 * h)
    return g


def power_iteration(M, iters=2000, seed=0):
    v = np.random.default_rng(seed).standard_normal(M.shape[0])
    lam = 0.0
    for _ in range(iters):
        v = M @ v
        lam = np.linalg.norm(v)
        v /= lam
    return float(v @ M @ v)


def svd_discrepancy(A, t, gammas):
    """||A w_gamma - t|| for ridge weights, from the SVD filter factors."""
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    beta = U.T @ t
    outside = max(float(t @ t - beta @ beta), 0.0)
    g = np.asarray(gammas, dtype=float)[:, None]
    inside = np.sum((g / (s ** 2 + g)) ** 2 * beta ** 2, axis=1)
    return np.sqrt(outside + inside)


def grid_sweep_gamma(A, t, target, lo=1e-10, hi=1e10, points=10_000, rounds=3):
    """argmin |discrepancy - target| on a log grid, re-gridded around the best node.

    One 10^4-point grid over twenty decades has ~5e-3 relative spacing, too
    coarse to resolve 1e-4; each zoom keeps 10^4 points on the neighbouring
    cell, so three rounds reach far below that.
    """
    for _ in range(rounds):
        g = np.geomspace(lo, hi, points)
        i = int(np.argmin(np.abs(svd_discrepancy(A, t, g) - target)))
        lo, hi = g[max(i - 1, 0)], g[min(i + 1, points - 1)]
    return float(g[i])


def ridge_svd(A, t, gamma):
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    return Vt.T @ (s / (s ** 2 + gamma) * (U.T @ t))
