#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Times the three hot loops on realistic workloads, checks that both
backends produce identical results, and prints a speedup table.  Run
from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both implementations are imported directly, so this works regardless of
which backend the ``MAXLINEAR_NO_NUMBA`` flag selected for the package.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from maxlinear import _kernels as kern
from maxlinear import simulate, ten_node_model


def _best_of(fn, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--repeat", type=int, default=5, help="timing repetitions (best is kept)"
    )
    parser.add_argument(
        "--n", type=int, default=200_000, help="sample length for the workloads"
    )
    args = parser.parse_args()

    if not kern.HAS_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare against")

    rng = np.random.default_rng(0)
    coef = ten_node_model()
    n, d = args.n, coef.shape[0]

    z = rng.pareto(2.0, size=(n, d)) + 1.0
    x = simulate(coef, 1, n)
    w = rng.uniform(0.5, 2.0, size=d)
    k = max(1, int(math.isqrt(n)))

    cases = [
        (
            f"max-times product ({n}x{d} by {d}x{d})",
            lambda: kern.max_times_product_numpy(z, coef.T),
            lambda: kern.max_times_product_numba(z, coef.T),
        ),
        (
            f"thresholded angular sum (n={n}, k={k})",
            lambda: kern.scaling_sum_numpy(x, k),
            lambda: kern.scaling_sum_numba(x, k),
        ),
        (
            f"scaled row-max inverse-square mean (n={n})",
            lambda: kern.scaled_rowmax_invsq_mean_numpy(x, w),
            lambda: kern.scaled_rowmax_invsq_mean_numba(x, w),
        ),
    ]

    # compile outside the timed region and verify agreement
    for name, np_fn, nb_fn in cases:
        a, b = np_fn(), nb_fn()
        if not np.allclose(
            np.asarray(a, dtype=np.float64).ravel(),
            np.asarray(b, dtype=np.float64).ravel(),
            rtol=1e-12,
            atol=0.0,
        ):
            raise SystemExit(f"backend mismatch in {name}: {a!r} vs {b!r}")

    header = f"{'kernel':<48} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, np_fn, nb_fn in cases:
        t_np = _best_of(np_fn, args.repeat)
        t_nb = _best_of(nb_fn, args.repeat)
        print(f"{name:<48} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>7.2f}x")


if __name__ == "__main__":
    main()
