# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels: corner enumeration and subset scans.

Contracts match entcomb._kernels_py; see there for the semantics. The
permutation stream is generated in lexicographic order so corner rows line
up exactly with the numpy backend.
"""

from libc.stdlib cimport free, malloc

import numpy as np


cdef inline long long _factorial(int m):
    cdef long long total = 1
    cdef int i
    for i in range(2, m + 1):
        total *= i
    return total


cdef inline bint _next_permutation(int* perm, int m) noexcept:
    # standard lexicographic successor; returns False after the last one
    cdef int k = m - 2
    cdef int l, tmp, lo, hi
    while k >= 0 and perm[k] >= perm[k + 1]:
        k -= 1
    if k < 0:
        return False
    l = m - 1
    while perm[l] <= perm[k]:
        l -= 1
    tmp = perm[k]; perm[k] = perm[l]; perm[l] = tmp
    lo = k + 1; hi = m - 1
    while lo < hi:
        tmp = perm[lo]; perm[lo] = perm[hi]; perm[hi] = tmp
        lo += 1; hi -= 1
    return True


def corner_points(const double[::1] values, int m):
    """All m! greedy corner vectors, rows in lexicographic permutation order."""
    cdef long long total = _factorial(m)
    out = np.empty((total, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef int* perm = <int*>malloc(m * sizeof(int))
    if perm == NULL:
        raise MemoryError()
    cdef long long row = 0
    cdef int k
    cdef unsigned int prefix
    cdef double prev, cur
    try:
        for k in range(m):
            perm[k] = k + 1
        while True:
            prefix = 0
            prev = 0.0
            for k in range(m):
                prefix |= 1u << (perm[k] - 1)
                cur = values[prefix]
                o[row, perm[k] - 1] = cur - prev
                prev = cur
            row += 1
            if not _next_permutation(perm, m):
                break
    finally:
        free(perm)
    return out


def worst_submodularity_gap(const double[::1] values, int m):
    """Minimum second difference over (T, i, j); first minimizer in scan order."""
    cdef double worst = np.inf
    cdef unsigned int wit_t = 0
    cdef int wit_i = 0, wit_j = 0
    cdef int i, j
    cdef unsigned int bi, bj, t, full
    cdef double gap
    full = (1u << m) - 1u
    for i in range(1, m + 1):
        bi = 1u << (i - 1)
        for j in range(i + 1, m + 1):
            bj = 1u << (j - 1)
            for t in range(full + 1u):
                if t & (bi | bj):
                    continue
                gap = (values[t | bi] - values[t]) - (values[t | bi | bj] - values[t | bj])
                if gap < worst:
                    worst = gap
                    wit_t = t; wit_i = i; wit_j = j
    return float(worst), int(wit_t), wit_i, wit_j


def max_subset_violation(const double[::1] values, int m, const double[:, ::1] points):
    """Per point, max over nonempty subsets T of sum(point[T]) - values[T]."""
    cdef Py_ssize_t npts = points.shape[0]
    if points.shape[1] != m:
        raise ValueError("points must have m columns")
    out = np.empty(npts, dtype=np.float64)
    cdef double[::1] o = out
    cdef unsigned int size = 1u << m
    cdef double* sums = <double*>malloc(size * sizeof(double))
    if sums == NULL:
        raise MemoryError()
    cdef int* lowbit_index = <int*>malloc(size * sizeof(int))
    if lowbit_index == NULL:
        free(sums)
        raise MemoryError()
    cdef Py_ssize_t p
    cdef unsigned int mask
    cdef int k
    cdef double best, s, v
    try:
        lowbit_index[0] = 0
        for k in range(m):
            lowbit_index[1u << k] = k
        for p in range(npts):
            sums[0] = 0.0
            best = -np.inf
            for mask in range(1u, size):
                s = sums[mask & (mask - 1u)] + points[p, lowbit_index[mask & (~mask + 1u)]]
                sums[mask] = s
                v = s - values[mask]
                if v > best:
                    best = v
            o[p] = best
    finally:
        free(sums)
        free(lowbit_index)
    return out
