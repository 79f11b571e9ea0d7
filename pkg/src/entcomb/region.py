"""The polytope of achievable pairwise entanglement distributions.

For a table of Bob-subset entropies, each merging order (a permutation of
the Bobs) yields one corner vector whose entries telescope to S(A). The
convex hull of all m! corners is the full polytope; it coincides with the
base polytope of the submodular set function T -> S(B_T),

    { E : sum_{k in T} E_k <= S(B_T) for all T,  sum_k E_k = S(A) },

which is the halfspace form used for membership and LP queries (the
equivalence is exercised by the test suite rather than assumed). Corner
entries can be negative: such a distribution needs entanglement borrowed
up front. The nonnegative part is what is achievable without borrowing;
its vertices are enumerated from the halfspace form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from . import kernels
from .entropy import SubsetEntropyTable, check_strong_subadditivity
from .errors import BadPermutation, DimensionMismatch, InvalidInput, TableInvalid
from .ioutil import (
    canonical_json,
    format_float,
    load_json,
    mask_from_str,
    mask_to_str,
    write_text_atomic,
)

TOL_MEMBERSHIP = 1e-8
TOL_DEDUP = 1e-9
SSA_ABORT_TOL = 1e-6
RANK_TOL = 1e-8

Mode = Literal["exact_region", "down_closure"]


@dataclass(frozen=True)
class CombingRegion:
    """V- and H-representations of one state's distribution polytope.

    ``vertices_fprime`` are the deduplicated merging-order corners of the
    full polytope, in first-occurrence order over lexicographic
    permutations. ``bounds[mask - 1]`` is the halfspace bound S(B_mask).
    ``vertices_f`` are the vertices of the nonnegative part, sorted
    lexicographically.
    """

    m: int
    s_A: float
    vertices_fprime: np.ndarray
    bounds: np.ndarray
    vertices_f: np.ndarray
    tol: float = TOL_MEMBERSHIP
    cached_dimension: int | None = None
    cached_volume: float | None = None

    def __post_init__(self):
        for name in ("vertices_fprime", "bounds", "vertices_f"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.vertices_fprime.ndim != 2 or self.vertices_fprime.shape[1] != self.m:
            raise DimensionMismatch("full-polytope vertices must be rows of length m")
        if self.bounds.shape != ((1 << self.m) - 1,):
            raise DimensionMismatch(f"need {(1 << self.m) - 1} halfspace bounds")

    def halfspaces(self) -> list[tuple[int, float]]:
        """(Bob mask, bound) pairs for the subset-sum inequalities."""
        return [(mask, float(self.bounds[mask - 1])) for mask in range(1, 1 << self.m)]


@dataclass(frozen=True)
class Witness:
    """First constraint a rejected point violates."""

    kind: Literal["negative_coordinate", "sum_mismatch", "subset_bound"]
    value: float
    bound: float
    coordinate: int | None = None  # 1-based Bob index
    subset: int | None = None  # Bob mask

    def describe(self, m: int | None = None) -> str:
        if self.kind == "negative_coordinate":
            return f"E_{self.coordinate} = {self.value:.6g} is negative"
        if self.kind == "sum_mismatch":
            return f"total {self.value:.6g} differs from S(A) = {self.bound:.6g}"
        subset = mask_to_str(self.subset, m) if m is not None else bin(self.subset)
        return f"sum over subset {subset} is {self.value:.6g} > bound {self.bound:.6g}"

    def to_payload(self, m: int) -> dict:
        payload: dict = {"kind": self.kind, "value": self.value, "bound": self.bound}
        if self.coordinate is not None:
            payload["coordinate"] = self.coordinate
        if self.subset is not None:
            payload["subset"] = mask_to_str(self.subset, m)
        return payload


def corner_point(table: SubsetEntropyTable, perm) -> np.ndarray:
    """Corner vector for one merging order.

    ``perm`` fixes the prefix ordering: entry perm[k] receives
    S(B_{perm[1]}..B_{perm[k]}) - S(B_{perm[1]}..B_{perm[k-1]}), so the
    entries always sum to S(A) by telescoping. In protocol terms the last
    party of ``perm`` is merged first.
    """
    order = [int(p) for p in perm]
    if sorted(order) != list(range(1, table.m + 1)):
        raise BadPermutation(f"{perm!r} is not a permutation of 1..{table.m}")
    out = np.empty(table.m, dtype=np.float64)
    prefix = 0
    prev = 0.0
    for p in order:
        prefix |= 1 << (p - 1)
        cur = float(table.values[prefix])
        out[p - 1] = cur - prev
        prev = cur
    return out


def build_region(table: SubsetEntropyTable, tol: float = TOL_MEMBERSHIP) -> CombingRegion:
    """Corners for all m! merging orders plus the halfspace form.

    Aborts when the table breaks strong subadditivity beyond roundoff,
    since the halfspace form is only valid for submodular tables. Memory
    is O(m! * m) for the corner sweep; practical up to m around 9.
    """
    report = check_strong_subadditivity(table)
    if report.worst_gap < -SSA_ABORT_TOL:
        raise TableInvalid(
            f"second difference {report.worst_gap} at witness {report.witness}; "
            "entropies cannot come from a valid state"
        )
    m = table.m
    corners = kernels.corner_points(table.values, m)
    vertices_fprime = _dedup_keep_first(corners)
    bounds = np.asarray(table.values[1:], dtype=np.float64).copy()
    vertices_f = _nonnegative_vertices(table.values, m, table.s_A)
    region = CombingRegion(
        m=m,
        s_A=table.s_A,
        vertices_fprime=vertices_fprime,
        bounds=bounds,
        vertices_f=vertices_f,
        tol=tol,
    )
    object.__setattr__(region, "cached_dimension", _affine_rank(vertices_fprime))
    object.__setattr__(region, "cached_volume", _volume_from_vertices(vertices_f, m))
    return region


def contains(
    region: CombingRegion,
    point,
    mode: Mode = "exact_region",
    tol: float | None = None,
) -> tuple[bool, Witness | None]:
    """Membership test with the first violated constraint as witness.

    ``exact_region`` checks nonnegativity, the sum equality and every
    subset bound; ``down_closure`` drops the equality (the full-subset
    bound still caps the total), which is the set reachable after freely
    discarding ebits.
    """
    p = np.asarray(point, dtype=np.float64).reshape(-1)
    if p.shape != (region.m,):
        raise DimensionMismatch(f"point has {p.size} entries, region has m={region.m}")
    if not np.isfinite(p).all():
        raise DimensionMismatch("point entries must be finite")
    tol = region.tol if tol is None else float(tol)

    for k in range(region.m):
        if p[k] < -tol:
            return False, Witness(
                kind="negative_coordinate", value=float(p[k]), bound=0.0, coordinate=k + 1
            )
    if mode == "exact_region":
        total = float(p.sum())
        if abs(total - region.s_A) > tol:
            return False, Witness(kind="sum_mismatch", value=total, bound=region.s_A)
    sums = _subset_sums(p, region.m)
    excess = sums - region.bounds
    bad = np.flatnonzero(excess > tol)
    if bad.size:
        i = int(bad[0])
        return False, Witness(
            kind="subset_bound",
            value=float(sums[i]),
            bound=float(region.bounds[i]),
            subset=i + 1,
        )
    return True, None


def affine_dimension(region: CombingRegion) -> int:
    """Dimension of the affine hull of the full polytope's corners."""
    if region.cached_dimension is not None:
        return region.cached_dimension
    return _affine_rank(region.vertices_fprime)


def degenerate(region: CombingRegion) -> bool:
    """True when the polytope spans less than the generic m-1 dimensions."""
    return affine_dimension(region) < region.m - 1


def volume(region: CombingRegion) -> float:
    """Intrinsic (m-1)-volume of the nonnegative part.

    The part lies in the hyperplane where the coordinates sum to S(A);
    dropping the last coordinate maps it into (m-1) dimensions and scales
    volumes by 1/sqrt(m), hence the sqrt(m) factor. Degenerate or
    empty/singleton parts report 0.
    """
    if region.cached_volume is not None:
        return region.cached_volume
    return _volume_from_vertices(region.vertices_f, region.m)


def _dedup_keep_first(points: np.ndarray) -> np.ndarray:
    keys = np.round(points, 9)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(idx)]


def _affine_rank(vertices: np.ndarray, tol: float = RANK_TOL) -> int:
    if len(vertices) <= 1:
        return 0
    deltas = vertices[1:] - vertices[0]
    singular = np.linalg.svd(deltas, compute_uv=False)
    return int((singular > tol).sum())


def _subset_sums(p: np.ndarray, m: int) -> np.ndarray:
    masks = np.arange(1, 1 << m)
    indicators = ((masks[:, None] >> np.arange(m)[None, :]) & 1).astype(np.float64)
    return indicators @ p


def _volume_from_vertices(vertices_f: np.ndarray, m: int) -> float:
    if m == 1 or len(vertices_f) <= 1:
        return 0.0
    proj = vertices_f[:, : m - 1]
    if _affine_rank(proj) < m - 1:
        return 0.0
    if m == 2:
        return float((proj.max() - proj.min()) * math.sqrt(2.0))
    try:
        hull = ConvexHull(proj)
    except QhullError:
        return 0.0
    return float(hull.volume * math.sqrt(m))


def _reduced_halfspaces(values: np.ndarray, m: int, s_A: float):
    """Inequalities A x <= b over x = (E_1..E_{m-1}) after eliminating E_m.

    Subset rows through party m become lower bounds on the complementary
    coordinates; the nonnegativity of E_m becomes sum(x) <= S(A).
    """
    n = m - 1
    bit_m = 1 << (m - 1)
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    for mask in range(1, 1 << m):
        a = np.zeros(n)
        if mask & bit_m:
            rest = ~mask & (bit_m - 1)
            if rest == 0:  # T = all Bobs: 0 <= 0
                continue
            for k in range(n):
                if (rest >> k) & 1:
                    a[k] = -1.0
            rows.append(a)
            rhs.append(float(values[mask]) - s_A)
        else:
            for k in range(n):
                if (mask >> k) & 1:
                    a[k] = 1.0
            rows.append(a)
            rhs.append(float(values[mask]))
    for k in range(n):
        a = np.zeros(n)
        a[k] = -1.0
        rows.append(a)
        rhs.append(0.0)
    rows.append(np.ones(n))
    rhs.append(s_A)
    return np.array(rows), np.array(rhs)


def _nonnegative_vertices(values: np.ndarray, m: int, s_A: float) -> np.ndarray:
    if m == 1:
        return np.array([[s_A]])
    A, b = _reduced_halfspaces(values, m, s_A)
    reduced = _hrep_vertices(A, b)
    if reduced.shape[0] == 0:
        return np.empty((0, m))
    full = np.column_stack([reduced, s_A - reduced.sum(axis=1)])
    full[np.abs(full) < 1e-12] = 0.0
    full = _dedup_keep_first(full)
    return full[np.lexsort(full.T[::-1])]


def _hrep_vertices(A: np.ndarray, b: np.ndarray, depth: int = 0) -> np.ndarray:
    """Vertices of the bounded polyhedron A x <= b.

    Full-dimensional polytopes go through qhull's halfspace intersection
    seeded with a max-margin interior point; lower-dimensional ones are
    reduced onto their affine hull (rows tight over the whole feasible
    set become equalities) and recursed.
    """
    n = A.shape[1]
    if n == 0:
        return np.zeros((1, 0))
    norms = np.linalg.norm(A, axis=1)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(
        c,
        A_ub=np.column_stack([A, norms]),
        b_ub=b,
        bounds=[(None, None)] * (n + 1),
        method="highs",
    )
    if res.status == 2:
        return np.empty((0, n))
    if res.status != 0:
        raise RuntimeError(f"interior-point LP failed with status {res.status}")
    x0 = res.x[:n]
    margin = res.x[-1]

    if margin > 1e-9:
        if n == 1:
            return _interval_vertices(A, b)
        try:
            intersection = HalfspaceIntersection(np.column_stack([A, -b]), x0)
            return _dedup_keep_first(intersection.intersections)
        except QhullError:
            pass  # fall through to the reduction path

    tight = []
    for i in range(A.shape[0]):
        opt = linprog(
            A[i], A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs"
        )
        if opt.status != 0:
            raise RuntimeError(f"slack LP failed with status {opt.status}")
        if b[i] - opt.fun <= 1e-9:
            tight.append(i)
    if not tight or depth >= 3:
        return _combinatorial_vertices(A, b)
    A_eq = A[tight]
    b_eq = b[tight]
    x_aff = x0 + np.linalg.lstsq(A_eq, b_eq - A_eq @ x0, rcond=None)[0]
    basis = null_space(A_eq, rcond=1e-8)
    if basis.shape[1] == 0:
        return x_aff[None, :]
    loose = [i for i in range(A.shape[0]) if i not in set(tight)]
    A_sub = A[loose] @ basis
    b_sub = b[loose] - A[loose] @ x_aff
    sub = _hrep_vertices(A_sub, b_sub, depth + 1)
    return sub @ basis.T + x_aff


def _interval_vertices(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    lo, hi = -math.inf, math.inf
    for a, bound in zip(A[:, 0], b):
        if a > 0:
            hi = min(hi, bound / a)
        elif a < 0:
            lo = max(lo, bound / a)
        elif bound < -TOL_DEDUP:
            return np.empty((0, 1))
    if lo > hi + TOL_DEDUP or math.isinf(lo) or math.isinf(hi):
        return np.empty((0, 1))
    if hi - lo < TOL_DEDUP:
        return np.array([[0.5 * (lo + hi)]])
    return np.array([[lo], [hi]])


def _combinatorial_vertices(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Last-resort vertex enumeration over row subsets; small n only."""
    import itertools

    n = A.shape[1]
    if n > 6:
        raise RuntimeError("vertex enumeration failed on a degenerate polytope")
    found = []
    for rows in itertools.combinations(range(A.shape[0]), n):
        sub = A[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, b[list(rows)])
        if (A @ x - b).max() <= 1e-8:
            found.append(x)
    if not found:
        return np.empty((0, n))
    return _dedup_keep_first(np.array(found))


def region_to_payload(region: CombingRegion) -> dict:
    return {
        "s_A": region.s_A,
        "vertices_Fprime": [list(map(float, v)) for v in region.vertices_fprime],
        "halfspaces": [
            {"subset": mask_to_str(mask, region.m), "bound": bound}
            for mask, bound in region.halfspaces()
        ],
        "vertices_F": [list(map(float, v)) for v in region.vertices_f],
        "dimension": affine_dimension(region),
        "volume": volume(region),
    }


def region_from_payload(payload) -> CombingRegion:
    required = {"s_A", "vertices_Fprime", "halfspaces", "vertices_F"}
    if not isinstance(payload, dict) or not required <= payload.keys():
        raise InvalidInput(f"region payload needs keys {sorted(required)}")
    try:
        vertices_fprime = np.asarray(payload["vertices_Fprime"], dtype=np.float64)
        vertices_f = np.asarray(payload["vertices_F"], dtype=np.float64)
        s_a = float(payload["s_A"])
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad region payload: {exc}") from exc
    if vertices_fprime.ndim != 2 or vertices_fprime.shape[0] == 0:
        raise InvalidInput("region payload needs at least one full-polytope vertex")
    m = vertices_fprime.shape[1]
    bounds = np.full((1 << m) - 1, np.nan)
    for item in payload["halfspaces"]:
        try:
            mask = mask_from_str(item["subset"], m)
            bounds[mask - 1] = float(item["bound"])
        except (TypeError, KeyError, ValueError) as exc:
            raise InvalidInput(f"bad halfspace entry {item!r}: {exc}") from exc
    if np.isnan(bounds).any():
        raise InvalidInput("region payload misses halfspace subsets")
    if vertices_f.size == 0:
        vertices_f = np.empty((0, m))
    region = CombingRegion(
        m=m,
        s_A=s_a,
        vertices_fprime=vertices_fprime,
        bounds=bounds,
        vertices_f=vertices_f,
    )
    if "dimension" in payload:
        object.__setattr__(region, "cached_dimension", int(payload["dimension"]))
    if "volume" in payload:
        object.__setattr__(region, "cached_volume", float(payload["volume"]))
    return region


def region_vertices_csv(region: CombingRegion) -> str:
    """Plot-ready CSV: one vertex per row, full polytope then positive part."""
    header = "set," + ",".join(f"E{k}" for k in range(1, region.m + 1))
    lines = [header]
    for name, block in (("Fprime", region.vertices_fprime), ("F", region.vertices_f)):
        for row in block:
            lines.append(name + "," + ",".join(format_float(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def save_region(region: CombingRegion, path: str) -> None:
    write_text_atomic(path, canonical_json(region_to_payload(region)))


def load_region(path: str) -> CombingRegion:
    return region_from_payload(load_json(path))
