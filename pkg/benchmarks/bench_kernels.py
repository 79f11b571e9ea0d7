#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

The workloads mirror how the package uses the kernels: a corner sweep over
all m! merging orders, the full submodularity scan, and batched halfspace
checks over many probe points. Tables are synthetic (kernel timing does
not depend on the entries being entropies).

Run after an editable install:

    python benchmarks/bench_kernels.py [--max-m-corners 9] [--repeats 3]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from entcomb import _kernels_py

try:
    from entcomb import _ckernels
except ImportError:
    _ckernels = None


def random_values(m: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.0, float(m), size=1 << m)
    values[0] = 0.0
    return values


def best_of(repeats, fn, *args):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def report_row(label, t_py, t_cy):
    if t_cy is None:
        print(f"{label:<42} {t_py * 1e3:>10.2f} ms {'-':>12} {'-':>9}")
    else:
        print(
            f"{label:<42} {t_py * 1e3:>10.2f} ms {t_cy * 1e3:>9.2f} ms "
            f"{t_py / t_cy:>8.1f}x"
        )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-m-corners", type=int, default=9)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled extension not available; timing the fallback only\n")

    print(f"{'workload':<42} {'python':>13} {'cython':>12} {'speedup':>9}")

    for m in range(6, args.max_m_corners + 1):
        values = random_values(m, seed=m)
        t_py, ref = best_of(args.repeats, _kernels_py.corner_points, values, m)
        t_cy = None
        if _ckernels is not None:
            t_cy, got = best_of(args.repeats, _ckernels.corner_points, values, m)
            assert np.array_equal(ref, got), "backend mismatch"
        report_row(f"corner sweep m={m} ({math.factorial(m)} orders)", t_py, t_cy)

    for m in (8, 10, 12):
        values = random_values(m, seed=100 + m)
        t_py, ref = best_of(
            args.repeats, _kernels_py.worst_submodularity_gap, values, m
        )
        t_cy = None
        if _ckernels is not None:
            t_cy, got = best_of(
                args.repeats, _ckernels.worst_submodularity_gap, values, m
            )
            assert ref == got, "backend mismatch"
        report_row(f"submodularity scan m={m}", t_py, t_cy)

    rng = np.random.default_rng(7)
    for m in (8, 10, 12):
        values = random_values(m, seed=200 + m)
        points = rng.normal(size=(2000, m))
        t_py, ref = best_of(
            args.repeats, _kernels_py.max_subset_violation, values, m, points
        )
        t_cy = None
        if _ckernels is not None:
            t_cy, got = best_of(
                args.repeats, _ckernels.max_subset_violation, values, m, points
            )
            assert np.allclose(ref, got, atol=1e-12), "backend mismatch"
        report_row(f"halfspace check m={m} (2000 points)", t_py, t_cy)

    return 0


if __name__ == "__main__":
    raise SystemExit(main())
