"""Numpy implementations of the hot kernels.

These are the reference backend; `entcomb._ckernels` implements the same
contracts in Cython and is preferred by :mod:`entcomb.kernels` when the
extension built. `corner_points` and `worst_submodularity_gap` are
bit-for-bit identical across the two backends (same operand pairs, same
scan order); `max_subset_violation` may differ by a few ulps because the
subset sums accumulate in a different order.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

_PERM_CHUNK = 40320  # permutations processed per batch; bounds peak memory


def corner_points(values: np.ndarray, m: int) -> np.ndarray:
    """All m! greedy corner vectors of the subset-entropy set function.

    Row order is lexicographic in the permutation of (1..m). Entry perm[k]
    of a row is values[prefix_k] - values[prefix_{k-1}] with prefix_k the
    bitmask of the first k parties of the permutation.
    """
    total = math.factorial(m)
    out = np.empty((total, m), dtype=np.float64)
    perm_iter = itertools.permutations(range(1, m + 1))
    row = 0
    while row < total:
        chunk = np.array(
            list(itertools.islice(perm_iter, _PERM_CHUNK)), dtype=np.int64
        )
        prefix = np.cumsum(1 << (chunk - 1), axis=1)
        s = values[prefix]
        inc = np.empty_like(s)
        inc[:, 0] = s[:, 0] - 0.0
        inc[:, 1:] = s[:, 1:] - s[:, :-1]
        block = out[row : row + chunk.shape[0]]
        np.put_along_axis(block, chunk - 1, inc, axis=1)
        row += chunk.shape[0]
    return out


def worst_submodularity_gap(values: np.ndarray, m: int) -> tuple[float, int, int, int]:
    """Minimum second difference over (T, i, j) with i, j outside T, i != j.

    Returns (gap, T, i, j) for the first minimizer in (i, j, T ascending)
    scan order. Requires m >= 2.
    """
    worst = math.inf
    witness = (0, 0, 0)
    all_masks = np.arange(1 << m)
    for i in range(1, m + 1):
        bi = 1 << (i - 1)
        for j in range(i + 1, m + 1):
            bj = 1 << (j - 1)
            t = all_masks[(all_masks & (bi | bj)) == 0]
            gaps = (values[t | bi] - values[t]) - (values[t | bi | bj] - values[t | bj])
            k = int(np.argmin(gaps))
            if gaps[k] < worst:
                worst = float(gaps[k])
                witness = (int(t[k]), i, j)
    return (worst, *witness)


def max_subset_violation(values: np.ndarray, m: int, points: np.ndarray) -> np.ndarray:
    """Per point, max over nonempty Bob subsets T of sum(point[T]) - values[T]."""
    pts = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, m)
    masks = np.arange(1, 1 << m)
    indicators = ((masks[:, None] >> np.arange(m)[None, :]) & 1).astype(np.float64)
    sums = pts @ indicators.T
    return (sums - values[masks]).max(axis=1)
