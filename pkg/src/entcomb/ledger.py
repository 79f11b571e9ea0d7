"""Entropic bookkeeping for the comb and for borrowed-resource breeding.

Two simulations live here. ``greedy_comb`` walks the Bobs in a fixed order
and decides per step between merging (when Alice's side carries at least
as much entropy as the Bobs that would remain) and an assisting
measurement that decouples the Bob at zero gain. ``breeding_schedule``
accounts for the round-based protocol that realizes an interior target
point from a convex combination of corners: negative corner entries are
borrowed pairs, positive entries are produced pairs, and each round is
amplified by the worst produced/borrowed ratio so the initially borrowed
stock fades out of the totals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import linprog

from .entropy import SubsetEntropyTable
from .errors import BadPermutation, NotAmplifying, PointOutsideRegion, ZeroBorrow
from .ioutil import format_float
from .region import CombingRegion, contains

T1_TIE_TOL = 1e-9
WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class CombStep:
    """One processed Bob: branch taken, ebits gained, Alice-side entropy left.

    ``approximate`` marks steps after the first assisting measurement,
    where the original subset entropies are only a model for the
    post-measurement marginals.
    """

    bob: int
    branch: Literal["T1_merge", "T2_assist"]
    gain: float
    a_side_entropy_after: float
    approximate: bool


def greedy_comb(table: SubsetEntropyTable, order) -> tuple[np.ndarray, list[CombStep]]:
    """Process Bobs in ``order`` and record the resulting pair distribution.

    At each step the current Alice-side entropy is compared against the
    entropy of the Bobs that remain after removing the processed one:
    merging (gain = the difference, >= 0) when Alice's side is at least as
    large, assisting (gain 0, Alice side unchanged) otherwise. Ties within
    1e-9 merge. A-side entropy plus cumulative gain stays equal to S(A) at
    every step, so the final vector sums to S(A).

    When every step merges, the result equals ``corner_point`` of the
    reversed order: the first processed Bob corresponds to the last prefix
    position.
    """
    order = [int(p) for p in order]
    if sorted(order) != list(range(1, table.m + 1)):
        raise BadPermutation(f"{order!r} is not a permutation of 1..{table.m}")
    gains = np.zeros(table.m, dtype=np.float64)
    steps: list[CombStep] = []
    remaining = table.full_mask
    a_side = table.s_A
    approximate = False
    for bob in order:
        remaining &= ~(1 << (bob - 1))
        s_rest = float(table.values[remaining])
        if a_side >= s_rest - T1_TIE_TOL:
            diff = a_side - s_rest
            gain = diff if diff > 0.0 else 0.0
            if diff > 0.0:
                a_side = s_rest
            gains[bob - 1] = gain
            steps.append(
                CombStep(
                    bob=bob,
                    branch="T1_merge",
                    gain=gain,
                    a_side_entropy_after=a_side,
                    approximate=approximate,
                )
            )
        else:
            steps.append(
                CombStep(
                    bob=bob,
                    branch="T2_assist",
                    gain=0.0,
                    a_side_entropy_after=a_side,
                    approximate=approximate,
                )
            )
            approximate = True
    return gains, steps


@dataclass(frozen=True)
class CaratheodoryDecomposition:
    """Convex combination of at most m+1 corner vectors hitting a target."""

    vertices: np.ndarray  # (k, m)
    weights: np.ndarray  # (k,), each > 1e-12, summing to 1

    def __post_init__(self):
        vertices = np.ascontiguousarray(self.vertices, dtype=np.float64)
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        vertices.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "weights", weights)

    @property
    def m(self) -> int:
        return self.vertices.shape[1]

    def reconstruct(self) -> np.ndarray:
        return self.weights @ self.vertices


def caratheodory_decompose(region: CombingRegion, target) -> CaratheodoryDecomposition:
    """Write a member of the region as a convex combination of corners.

    An LP finds weights over all corners minimizing the max-norm
    reconstruction error; a null-space pivot loop then thins the support
    to at most m+1 corners without moving the combination.
    """
    target = np.asarray(target, dtype=np.float64).reshape(-1)
    member, witness = contains(region, target, mode="exact_region")
    if not member:
        raise PointOutsideRegion(witness.describe(region.m))

    corners = region.vertices_fprime
    k = corners.shape[0]
    m = region.m
    # variables (w_1..w_k, t): minimize t with |corners^T w - target|_inf <= t
    c = np.zeros(k + 1)
    c[-1] = 1.0
    a_rows = np.vstack([corners.T, -corners.T])
    a_ub = np.column_stack([a_rows, -np.ones(2 * m)])
    b_ub = np.concatenate([target, -target])
    a_eq = np.concatenate([np.ones(k), [0.0]])[None, :]
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * (k + 1),
        method="highs",
    )
    if res.status != 0 or res.x[-1] > region.tol:
        raise PointOutsideRegion(
            "no convex combination of corners reproduces the point within tolerance"
        )
    weights = np.clip(res.x[:k], 0.0, None)
    weights /= weights.sum()
    support = np.flatnonzero(weights > WEIGHT_FLOOR)
    weights, support = _thin_support(corners, weights, support, m)
    return CaratheodoryDecomposition(vertices=corners[support], weights=weights[support])


def _thin_support(corners, weights, support, m):
    """Null-space pivots until at most m+1 corners carry weight.

    With more than m+1 support corners the system [corners^T; 1] has a
    null direction; moving the weights along it until one hits zero keeps
    both the combination point and the weight sum fixed.
    """
    weights = weights.copy()
    while support.size > m + 1:
        stacked = np.vstack([corners[support].T, np.ones(support.size)])
        _, _, vt = np.linalg.svd(stacked)
        direction = vt[-1]
        if np.abs(stacked @ direction).max() > 1e-8:
            break  # no usable null direction; keep the larger support
        if not (direction < 0).any():
            direction = -direction
        negative = direction < 0
        step = (weights[support][negative] / -direction[negative]).min()
        updated = weights[support] + step * direction
        updated[updated <= WEIGHT_FLOOR] = 0.0
        weights[support] = np.clip(updated, 0.0, None)
        weights /= weights.sum()
        support = np.flatnonzero(weights > WEIGHT_FLOOR)
    return weights, support


@dataclass(frozen=True)
class LedgerRound:
    """One production round.

    Counts are rates per unit of the round-0 batch, or floored absolute
    copy numbers when the schedule runs in integer mode.
    """

    index: int
    consumed: float
    borrowed: np.ndarray  # per party
    produced: np.ndarray  # per party
    cumulative_consumed: float  # includes the initial assist copies
    borrowed_weight: float


@dataclass(frozen=True)
class LedgerReport:
    """Round-by-round accounting of a borrowing-and-amplification schedule.

    ``borrowed_rates``/``produced_rates`` are the per-party pair rates of a
    unit round; ``ratios`` their quotient (inf where nothing is borrowed);
    ``x`` is the minimum ratio over borrowing parties and the per-round
    amplification. ``total_consumed`` follows the closed form
    n0 + (x**(r+1) - 1)/(x - 1), and ``borrowed_weight`` is the share of
    the initial assist copies in that total.
    """

    n0: float
    rounds: int
    borrowed_rates: np.ndarray
    produced_rates: np.ndarray
    ratios: np.ndarray
    x: float
    rows: tuple[LedgerRound, ...]
    total_consumed: float
    borrowed_weight: float


def breeding_schedule(
    decomp: CaratheodoryDecomposition,
    n0: float,
    rounds: int,
    copies: float | None = None,
) -> LedgerReport:
    """Amplification ledger for realizing a decomposed target point.

    ``n0`` is the number of source copies (per unit round) spent on
    assisting to prepare the initially borrowed pairs. With ``copies`` set,
    all round counts are floored integer copy numbers for a finite batch
    of that size instead of asymptotic rates.
    """
    if n0 <= 0:
        raise ValueError("n0 must be positive")
    if rounds < 0:
        raise ValueError("rounds must be nonnegative")
    borrowed_rates = decomp.weights @ np.clip(-decomp.vertices, 0.0, None)
    produced_rates = decomp.weights @ np.clip(decomp.vertices, 0.0, None)
    borrowing = borrowed_rates > WEIGHT_FLOOR
    if not borrowing.any():
        raise ZeroBorrow(
            "no corner in the decomposition has a negative part; nothing to borrow",
            produced_rates=produced_rates,
        )
    ratios = np.full(decomp.m, math.inf)
    ratios[borrowing] = produced_rates[borrowing] / borrowed_rates[borrowing]
    x = float(ratios[borrowing].min())
    if x <= 1.0:
        raise NotAmplifying(
            f"amplification ratio {x} <= 1; the target lies outside the "
            "strictly positive interior"
        )

    rows = []
    if copies is None:
        running = float(n0)
        for i in range(rounds + 1):
            scale = x**i
            running += scale
            rows.append(
                LedgerRound(
                    index=i,
                    consumed=scale,
                    borrowed=borrowed_rates * scale,
                    produced=produced_rates * scale,
                    cumulative_consumed=running,
                    borrowed_weight=n0 / running,
                )
            )
    else:
        if copies <= 0:
            raise ValueError("copies must be positive")
        assist = math.floor(copies * n0)
        running = float(assist)
        for i in range(rounds + 1):
            consumed = math.floor(copies * x**i)
            running += consumed
            rows.append(
                LedgerRound(
                    index=i,
                    consumed=float(consumed),
                    borrowed=np.floor(borrowed_rates * copies * x**i),
                    produced=np.floor(produced_rates * copies * x**i),
                    cumulative_consumed=running,
                    borrowed_weight=assist / running if running else 0.0,
                )
            )

    total = n0 + (x ** (rounds + 1) - 1.0) / (x - 1.0)
    return LedgerReport(
        n0=float(n0),
        rounds=rounds,
        borrowed_rates=borrowed_rates,
        produced_rates=produced_rates,
        ratios=ratios,
        x=x,
        rows=tuple(rows),
        total_consumed=total,
        borrowed_weight=n0 / total,
    )


def ledger_csv(report: LedgerReport) -> str:
    """One row per round: round, consumed, produced per party, borrowed weight."""
    m = report.produced_rates.size
    header = (
        "round,consumed,"
        + ",".join(f"produced_B{k}" for k in range(1, m + 1))
        + ",borrowed_weight"
    )
    lines = [header]
    for row in report.rows:
        cells = [str(row.index), format_float(row.consumed)]
        cells += [format_float(float(v)) for v in row.produced]
        cells.append(format_float(row.borrowed_weight))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
