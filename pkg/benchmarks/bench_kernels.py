#!/usr/bin/env python3
"""Compare the numba and numpy GF(p) rank kernels on random matrices.

The package picks the numba kernel at import when it is available (set
MATROID_TVERBERG_NUMBA=0 to force the numpy fallback everywhere).  This
script times both implementations directly on the matrix shapes the closure
oracle actually sees: a handful of rows, a handful of columns.

Usage: python3 benchmarks/bench_kernels.py [--iterations N]
"""

import argparse
import random
import statistics
import time

import numpy as np

from matroid_tverberg.kernels import NUMBA_AVAILABLE, gfp_rank_numba, gfp_rank_numpy

SHAPES = [(4, 3), (8, 4), (13, 5), (26, 8), (60, 12)]
PRIMES = [2, 3, 7]


def make_matrices(rng, rows, cols, p, count):
    mats = []
    for _ in range(count):
        mats.append(
            np.array(
                [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)],
                dtype=np.int64,
            )
        )
    return mats


def time_kernel(kernel, mats, p, iterations):
    # warm-up (triggers JIT compilation on the numba path)
    for mat in mats[:3]:
        kernel(mat, p)
    samples = []
    for _ in range(iterations):
        start = time.perf_counter()
        for mat in mats:
            kernel(mat, p)
        samples.append((time.perf_counter() - start) / len(mats))
    return statistics.median(samples) * 1e6  # microseconds per call


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iterations", type=int, default=30)
    parser.add_argument("--matrices", type=int, default=50)
    args = parser.parse_args()

    rng = random.Random(2024)
    print(f"numba available: {NUMBA_AVAILABLE}")
    header = f"{'shape':>10} {'p':>3} {'numpy us':>10} {'numba us':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for rows, cols in SHAPES:
        shape = f"{rows}x{cols}"
        for p in PRIMES:
            mats = make_matrices(rng, rows, cols, p, args.matrices)
            t_numpy = time_kernel(gfp_rank_numpy, mats, p, args.iterations)
            if NUMBA_AVAILABLE:
                t_numba = time_kernel(gfp_rank_numba, mats, p, args.iterations)
                for mat in mats:
                    assert gfp_rank_numba(mat, p) == gfp_rank_numpy(mat, p)
                ratio = t_numpy / t_numba if t_numba else float("inf")
                print(f"{shape:>10} {p:>3} {t_numpy:>10.2f} {t_numba:>10.2f} {ratio:>7.1f}x")
            else:
                print(f"{shape:>10} {p:>3} {t_numpy:>10.2f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
