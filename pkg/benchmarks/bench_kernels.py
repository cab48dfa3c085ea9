"""Compare the compiled and numpy kernels on entropy and gradient evaluation.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one line per (kernel, size) with the median time per call for each
backend, the speedup and the largest disagreement between them.
"""
import argparse
import timeit

import numpy as np

from ecstates import random_channel
from ecstates.kernels import compiled_backend, python_backend

SIZES = [(2, 2), (4, 2), (8, 3), (16, 4), (32, 4)]


def _time(fn, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    per_call = min(timeit.repeat(fn, number=number, repeat=repeat)) / number
    return per_call


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if compiled_backend is None:
        print("compiled backend not built; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'d':>4}{'k':>3}{'numpy [us]':>13}{'cython [us]':>13}{'speedup':>9}{'max diff':>11}")
    for d, k in SIZES:
        K = random_channel(d, d, k, rng).stack
        x = rng.standard_normal(2 * d)
        phi = x[:d] + 1j * x[d:]
        cases = [
            ("pure_output_entropy", lambda b: b.pure_output_entropy(K, phi)),
            ("output_entropy_grad", lambda b: b.output_entropy_grad(K, x)),
        ]
        for name, call in cases:
            tp = _time(lambda: call(python_backend), args.repeat)
            if compiled_backend is None:
                print(f"{name:<22}{d:>4}{k:>3}{tp * 1e6:>13.1f}{'-':>13}{'-':>9}{'-':>11}")
                continue
            tc = _time(lambda: call(compiled_backend), args.repeat)
            a, b = call(python_backend), call(compiled_backend)
            diff = float(np.max(np.abs(np.hstack([np.ravel(a[1]), a[0]]) - np.hstack([np.ravel(b[1]), b[0]])))
                         if isinstance(a, tuple) else abs(a - b))
            print(f"{name:<22}{d:>4}{k:>3}{tp * 1e6:>13.1f}{tc * 1e6:>13.1f}{tp / tc:>9.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
