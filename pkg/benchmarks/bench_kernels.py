"""Time the numba kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Both code paths are imported side by side, so the backend flag does not
matter here. Numba compile time is excluded by a warm-up call.
"""

import argparse
import time

import numpy as np

from classreg import _kernels as K
from classreg._accel import NUMBA_AVAILABLE
from classreg.datagen import gen_boolean, gen_gaussian_two_class
from classreg.features import BasisSpec
from classreg.linalg import gram


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    for m in (10, 100):
        M = gram(rng.standard_normal((2 * m, m)))
        yield f"cholesky m={m}", "cholesky", (M, 1e-14 * np.abs(M).max())

    ds = gen_gaussian_two_class(200, separation=1.0, seed=0)
    X = BasisSpec.linear2d().expand(ds.features)
    t = ds.targets.astype(float)
    yield "perceptron 200x3, 2000 passes", "perceptron", (X, t, np.zeros(3), 0.5, 0.0, -1.0, 2000, 1)

    Xq = BasisSpec.quadratic2d().expand(ds.features)
    yield "perceptron 200x6, 2000 passes", "perceptron", (Xq, t, np.zeros(6), 0.5, 0.01, -1.0, 2000, 1)

    b = gen_boolean(256, 8, 2)
    Xb = BasisSpec.linear(8).expand(b.features)
    yield "winnow 256x9", "winnow", (Xb, b.targets.astype(float), np.ones(9), 2.0, 9.0, 2000, 1)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"numba available: {NUMBA_AVAILABLE}")
    print(f"{'case':36s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for label, name, call_args in cases():
        t_np = best_of(getattr(K, f"_{name}_numpy"), call_args, args.repeat)
        if NUMBA_AVAILABLE:
            jit = getattr(K, f"{name}_jit")
            jit(*call_args)  # compile outside the timing
            t_jit = best_of(jit, call_args, args.repeat)
            print(f"{label:36s} {t_np * 1e3:11.3f} {t_jit * 1e3:11.3f} {t_np / t_jit:7.1f}x")
        else:
            print(f"{label:36s} {t_np * 1e3:11.3f} {'n/a':>11s} {'':>8s}")


if __name__ == "__main__":
    main()
