"""Kernel backend selection.

Prefers the compiled extension (`entcomb._ckernels`) and falls back to the
numpy implementations when it is absent. Set ``ENTCOMB_PURE_PYTHON=1`` to
force the fallback, e.g. for benchmarking or debugging.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("ENTCOMB_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py


def backend() -> str:
    return "python" if _impl is _kernels_py else "cython"


def corner_points(values: np.ndarray, m: int) -> np.ndarray:
    """All m! greedy corner vectors; see `_kernels_py.corner_points`."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.shape != (1 << m,):
        raise ValueError(f"expected {1 << m} table entries, got {values.shape}")
    return _impl.corner_points(values, m)


def worst_submodularity_gap(values: np.ndarray, m: int) -> tuple[float, int, int, int]:
    """(gap, T, i, j) for the worst second difference; requires m >= 2."""
    if m < 2:
        raise ValueError("second differences need at least two parties")
    values = np.ascontiguousarray(values, dtype=np.float64)
    return _impl.worst_submodularity_gap(values, m)


def max_subset_violation(values: np.ndarray, m: int, points: np.ndarray) -> np.ndarray:
    """Per point, the largest halfspace violation over nonempty subsets."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    points = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, m)
    return _impl.max_subset_violation(values, m, points)
