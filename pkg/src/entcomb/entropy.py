"""Entropies of every Bob subset, merging costs and the submodularity check.

The table stores Bob-side entropies only: any entropy that mixes Alice in
can be rewritten through purity of the global state, e.g. S(A B_3..B_m) =
S(B_1 B_2). Bob subsets are bitmasks with bit k-1 standing for B_k, so the
full mask ``(1 << m) - 1`` is all Bobs and its entry equals S(A).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, InvalidInput, InvalidSubset
from .ioutil import canonical_json, load_json, mask_from_str, mask_to_str, write_text_atomic
from .states import PureState, subset_entropy

MAX_BOBS = 12
SSA_WARN_TOL = 1e-9


@dataclass(frozen=True)
class SubsetEntropyTable:
    """Entropy in ebits for every nonempty Bob subset of one pure state."""

    m: int
    values: np.ndarray  # length 2**m; values[mask] = S(B_mask), values[0] = 0

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.shape != (1 << self.m,):
            raise DimensionMismatch(f"expected {1 << self.m} entries, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    @property
    def s_A(self) -> float:
        """Total entanglement of Alice with all Bobs."""
        return float(self.values[self.full_mask])

    def entropy(self, subset: int) -> float:
        if not 0 <= subset <= self.full_mask:
            raise InvalidSubset(f"mask {bin(subset)} out of range for m={self.m}")
        return float(self.values[subset])

    def entries(self) -> dict[int, float]:
        return {mask: float(self.values[mask]) for mask in range(1, 1 << self.m)}


@dataclass(frozen=True)
class SsaReport:
    """Worst second difference of the subset-entropy set function."""

    worst_gap: float
    witness: tuple[int, int, int] | None  # (subset T, party i, party j)
    violated: bool


def build_table(state: PureState) -> SubsetEntropyTable:
    """Entropy of every nonempty Bob subset, via the smaller-side trace."""
    m = state.layout.m
    if m > MAX_BOBS:
        raise DimensionMismatch(f"m={m} Bobs exceeds the m<={MAX_BOBS} guard")
    values = np.zeros(1 << m, dtype=np.float64)
    for mask in range(1, 1 << m):
        values[mask] = subset_entropy(state, mask << 1)
    return SubsetEntropyTable(m=m, values=values)


def merging_cost(table: SubsetEntropyTable, mover: int, receiver_side: int) -> float:
    """Ebit cost of merging B_mover into Alice's side.

    ``receiver_side`` is the Bob subset already merged with Alice. The cost
    is the conditional entropy of the mover given the receiving side,
    rewritten through purity as S(Bobs minus receiver minus mover) minus
    S(Bobs minus receiver). Negative cost means that many ebits are gained.
    """
    if not 1 <= mover <= table.m:
        raise InvalidSubset(f"mover index {mover} out of 1..{table.m}")
    mover_bit = 1 << (mover - 1)
    if receiver_side & ~table.full_mask:
        raise InvalidSubset(f"receiver mask {bin(receiver_side)} out of range")
    if receiver_side & mover_bit:
        raise InvalidSubset(f"B_{mover} is already on the receiving side")
    remaining = table.full_mask & ~receiver_side
    return float(table.values[remaining & ~mover_bit] - table.values[remaining])


def check_strong_subadditivity(table: SubsetEntropyTable) -> SsaReport:
    """Scan all second differences S(T+i)-S(T) - [S(T+i+j)-S(T+j)].

    Strong subadditivity of the von Neumann entropy makes every one of them
    nonnegative, so anything clearly below zero signals a broken entropy
    computation rather than interesting physics.
    """
    if table.m < 2:
        return SsaReport(worst_gap=math.inf, witness=None, violated=False)
    gap, t_mask, i, j = kernels.worst_submodularity_gap(table.values, table.m)
    return SsaReport(worst_gap=gap, witness=(t_mask, i, j), violated=gap < -SSA_WARN_TOL)


def table_to_payload(table: SubsetEntropyTable) -> dict:
    return {
        "m": table.m,
        "entropies": {
            mask_to_str(mask, table.m): float(table.values[mask])
            for mask in range(1, 1 << table.m)
        },
        "s_A": table.s_A,
    }


def table_from_payload(payload) -> SubsetEntropyTable:
    if not isinstance(payload, dict) or "m" not in payload or "entropies" not in payload:
        raise InvalidInput("table payload needs 'm' and 'entropies'")
    try:
        m = int(payload["m"])
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad Bob count: {exc}") from exc
    if not 1 <= m <= MAX_BOBS:
        raise InvalidInput(f"Bob count {m} out of range 1..{MAX_BOBS}")
    values = np.full(1 << m, np.nan)
    values[0] = 0.0
    for key, val in payload["entropies"].items():
        mask = mask_from_str(key, m)
        values[mask] = float(val)
    if np.isnan(values).any():
        missing = [mask_to_str(i, m) for i in np.flatnonzero(np.isnan(values))]
        raise InvalidInput(f"table payload misses subsets {missing[:4]}")
    if values.min() < -1e-9:
        raise InvalidInput(f"negative entropy {values.min()} in table payload")
    table = SubsetEntropyTable(m=m, values=np.clip(values, 0.0, None))
    if "s_A" in payload and abs(float(payload["s_A"]) - table.s_A) > 1e-6:
        raise InvalidInput("stored s_A disagrees with the full-subset entry")
    return table


def save_table(table: SubsetEntropyTable, path: str) -> None:
    write_text_atomic(path, canonical_json(table_to_payload(table)))


def load_table(path: str) -> SubsetEntropyTable:
    return table_from_payload(load_json(path))
