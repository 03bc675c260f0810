"""Inner loops: Cholesky, triangular solves, perceptron and WINNOW passes.

Every kernel exists twice. ``*_loop`` is written as scalar loops so numba can
compile it (exported as ``*_jit``); ``*_numpy`` is the vectorized fallback.
The unsuffixed name is whichever one the backend flag selects.

Trainer kernels return history arrays sampled every ``stride`` passes (the
final pass is always recorded) so a 1e8-pass run does not allocate 1e8 floats.
"""

import numpy as np

from ._accel import NUMBA_ENABLED, maybe_njit


# --------------------------------------------------------------------------
# Cholesky
# --------------------------------------------------------------------------

def _cholesky_loop(M, tol):
    n = M.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        s = M[j, j]
        for k in range(j):
            s -= L[j, k] * L[j, k]
        if s <= tol:
            return L, j
        d = np.sqrt(s)
        L[j, j] = d
        for i in range(j + 1, n):
            s = M[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            L[i, j] = s / d
    return L, -1


def _cholesky_numpy(M, tol):
    n = M.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        row = L[j, :j]
        s = M[j, j] - row @ row
        if s <= tol:
            return L, j
        d = np.sqrt(s)
        L[j, j] = d
        L[j + 1:, j] = (M[j + 1:, j] - L[j + 1:, :j] @ row) / d
    return L, -1


def _forward_loop(L, b):
    n = L.shape[0]
    y = np.empty(n)
    for i in range(n):
        s = b[i]
        for k in range(i):
            s -= L[i, k] * y[k]
        y[i] = s / L[i, i]
    return y


def _forward_numpy(L, b):
    n = L.shape[0]
    y = np.empty(n)
    for i in range(n):
        y[i] = (b[i] - L[i, :i] @ y[:i]) / L[i, i]
    return y


def _backward_t_loop(L, y):
    # solves L^T x = y
    n = L.shape[0]
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        s = y[i]
        for k in range(i + 1, n):
            s -= L[k, i] * x[k]
        x[i] = s / L[i, i]
    return x


def _backward_t_numpy(L, y):
    n = L.shape[0]
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - L[i + 1:, i] @ x[i + 1:]) / L[i, i]
    return x


# --------------------------------------------------------------------------
# Perceptron
# --------------------------------------------------------------------------

def _perceptron_loop(X, t, w0, eta, gamma, decay_sign, max_iter, stride):
    n, m = X.shape
    w = w0.copy()
    cap = max_iter // stride + 2
    h_iter = np.zeros(cap, dtype=np.int64)
    h_loss = np.zeros(cap)
    h_err = np.zeros(cap, dtype=np.int64)
    n_hist = 0
    passes = 0
    converged = False
    while passes < max_iter:
        passes += 1
        errors = 0
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += w[j] * X[i, j]
            h = 1.0 if s > 0.0 else 0.0
            diff = t[i] - h
            if diff != 0.0:
                errors += 1
            if diff != 0.0 or gamma != 0.0:
                for j in range(m):
                    w[j] = w[j] + eta * (diff * X[i, j] + decay_sign * gamma * w[j])
        if errors == 0:
            converged = True
        if passes % stride == 0 or converged or passes == max_iter:
            sq = 0.0
            for j in range(m):
                sq += w[j] * w[j]
            h_iter[n_hist] = passes
            h_loss[n_hist] = 0.5 * errors + 0.5 * gamma * sq
            h_err[n_hist] = errors
            n_hist += 1
        if converged:
            break
    return w, passes, converged, h_iter[:n_hist], h_loss[:n_hist], h_err[:n_hist]


def _perceptron_numpy(X, t, w0, eta, gamma, decay_sign, max_iter, stride):
    n = X.shape[0]
    w = w0.copy()
    h_iter, h_loss, h_err = [], [], []
    passes = 0
    converged = False
    while passes < max_iter:
        passes += 1
        errors = 0
        for i in range(n):
            x = X[i]
            h = 1.0 if x @ w > 0.0 else 0.0
            diff = t[i] - h
            if diff != 0.0:
                errors += 1
            if diff != 0.0 or gamma != 0.0:
                w = w + eta * (diff * x + decay_sign * gamma * w)
        converged = errors == 0
        if passes % stride == 0 or converged or passes == max_iter:
            h_iter.append(passes)
            h_loss.append(0.5 * errors + 0.5 * gamma * float(w @ w))
            h_err.append(errors)
        if converged:
            break
    return (w, passes, converged, np.array(h_iter, dtype=np.int64),
            np.array(h_loss), np.array(h_err, dtype=np.int64))


# --------------------------------------------------------------------------
# WINNOW
# --------------------------------------------------------------------------

def _winnow_loop(X, t, w0, alpha, threshold, max_iter, stride):
    n, m = X.shape
    w = w0.copy()
    cap = max_iter // stride + 2
    h_iter = np.zeros(cap, dtype=np.int64)
    h_loss = np.zeros(cap)
    h_err = np.zeros(cap, dtype=np.int64)
    n_hist = 0
    passes = 0
    converged = False
    w_min = np.inf
    for j in range(m):
        if w[j] < w_min:
            w_min = w[j]
    while passes < max_iter:
        passes += 1
        errors = 0
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += w[j] * X[i, j]
            h = 1.0 if s > threshold else 0.0
            diff = t[i] - h
            if diff != 0.0:
                errors += 1
                for j in range(m):
                    w[j] = w[j] * alpha ** (diff * X[i, j])
                    if w[j] < w_min:
                        w_min = w[j]
        if errors == 0:
            converged = True
        if passes % stride == 0 or converged or passes == max_iter:
            h_iter[n_hist] = passes
            h_loss[n_hist] = 0.5 * errors
            h_err[n_hist] = errors
            n_hist += 1
        if converged:
            break
    return (w, passes, converged, h_iter[:n_hist], h_loss[:n_hist],
            h_err[:n_hist], w_min)


def _winnow_numpy(X, t, w0, alpha, threshold, max_iter, stride):
    n = X.shape[0]
    w = w0.copy()
    h_iter, h_loss, h_err = [], [], []
    passes = 0
    converged = False
    w_min = float(w.min())
    while passes < max_iter:
        passes += 1
        errors = 0
        for i in range(n):
            x = X[i]
            h = 1.0 if x @ w > threshold else 0.0
            diff = t[i] - h
            if diff != 0.0:
                errors += 1
                w = w * alpha ** (diff * x)
                w_min = min(w_min, float(w.min()))
        converged = errors == 0
        if passes % stride == 0 or converged or passes == max_iter:
            h_iter.append(passes)
            h_loss.append(0.5 * errors)
            h_err.append(errors)
        if converged:
            break
    return (w, passes, converged, np.array(h_iter, dtype=np.int64),
            np.array(h_loss), np.array(h_err, dtype=np.int64), w_min)


cholesky_jit = maybe_njit(_cholesky_loop)
forward_jit = maybe_njit(_forward_loop)
backward_t_jit = maybe_njit(_backward_t_loop)
perceptron_jit = maybe_njit(_perceptron_loop)
winnow_jit = maybe_njit(_winnow_loop)

if NUMBA_ENABLED:
    cholesky = cholesky_jit
    forward = forward_jit
    backward_t = backward_t_jit
    perceptron_passes = perceptron_jit
    winnow_passes = winnow_jit
else:
    cholesky = _cholesky_numpy
    forward = _forward_numpy
    backward_t = _backward_t_numpy
    perceptron_passes = _perceptron_numpy
    winnow_passes = _winnow_numpy
