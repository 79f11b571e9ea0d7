"""Queries built on top of combing regions.

* LOCC rate lower bounds: a source state can be turned into r copies of a
  target whenever r times the target's per-Bob entanglement vector is
  dominated by a point of the source's region (discarding ebits is free,
  so the down-closure is the right membership notion). The largest such r
  has a closed form: the minimum over Bob subsets T of S(B_T) / s(T).
* Overlap of a region with an externally supplied halfspace system, e.g.
  a distributed-compression rate region.
* A scalar multipartite-entanglement quantity: the volume of the region,
  which vanishes exactly when the region degenerates (as it does for
  states that factor across a cut through the Bobs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .entropy import build_table
from .errors import DimensionMismatch, InvalidInput, PartyMismatch, ZeroTarget
from .ioutil import load_json
from .region import CombingRegion, build_region, volume
from .states import PureState, reduced_density, von_neumann_entropy, with_alice

ENTROPY_FLOOR = 1e-12


@dataclass(frozen=True)
class RateBound:
    """Lower bound r on target copies per source copy under LOCC.

    ``binding_subset`` is the Bob mask (relative to the chosen distinguished
    party's ordering) whose halfspace caps the rate.
    """

    r: float
    alice_choice: int
    binding_subset: int


def target_marginal_entropies(target: PureState, alice: int) -> np.ndarray:
    """Single-party entropies of every non-distinguished party, in order."""
    n = target.layout.n_parties
    if not 0 <= alice < n:
        raise DimensionMismatch(f"party index {alice} out of range for {n} parties")
    return np.array(
        [
            von_neumann_entropy(reduced_density(target, 1 << q))
            for q in range(n)
            if q != alice
        ]
    )


def rate_lower_bound(source: PureState, target: PureState, alice: int = 0) -> RateBound:
    """Largest r with r * (target marginals) inside the source down-closure.

    Equals min over Bob subsets T with positive target weight s(T) of
    S(B_T)/s(T); the binding subset is the minimizer (lowest mask on ties).
    """
    if source.layout.n_parties != target.layout.n_parties:
        raise PartyMismatch(
            f"source has {source.layout.n_parties} parties, "
            f"target has {target.layout.n_parties}"
        )
    marginals = target_marginal_entropies(target, alice)
    if marginals.max(initial=0.0) <= ENTROPY_FLOOR:
        raise ZeroTarget("target carries no entanglement with any single party")
    table = build_table(with_alice(source, alice))
    m = table.m
    ratios: dict[int, float] = {}
    for mask in range(1, 1 << m):
        weight = float(sum(marginals[k] for k in range(m) if (mask >> k) & 1))
        if weight > ENTROPY_FLOOR:
            ratios[mask] = float(table.values[mask]) / weight
    best_r = min(ratios.values())
    # roundoff-level ties resolve to the lowest mask
    tie_band = best_r + 1e-12 * max(1.0, abs(best_r))
    binding = min(mask for mask, ratio in ratios.items() if ratio <= tie_band)
    return RateBound(r=max(best_r, 0.0), alice_choice=alice, binding_subset=binding)


def best_rate_over_parties(source: PureState, target: PureState) -> RateBound:
    """Best rate bound over every choice of the distinguished party.

    Choices whose target marginals all vanish are skipped; ties keep the
    lowest party index.
    """
    best: RateBound | None = None
    for alice in range(source.layout.n_parties):
        try:
            candidate = rate_lower_bound(source, target, alice)
        except ZeroTarget:
            continue
        if best is None or candidate.r > best.r:
            best = candidate
    if best is None:
        raise ZeroTarget("target carries no entanglement under any party choice")
    return best


def region_overlap(
    region: CombingRegion, constraints
) -> tuple[bool, np.ndarray | None]:
    """Feasibility of the region intersected with lower-bound halfspaces.

    ``constraints`` is a list of (coefficients, lower_bound) meaning
    coefficients . E >= lower_bound. Returns a witness point maximizing the
    worst normalized slack over the constraints, so witnesses sit as deep
    in the overlap as the region allows.
    """
    m = region.m
    rows = []
    for coeffs, bound in constraints:
        a = np.asarray(coeffs, dtype=np.float64).reshape(-1)
        if a.shape != (m,):
            raise DimensionMismatch(f"constraint length {a.size} but m={m}")
        if not (np.isfinite(a).all() and np.isfinite(bound)):
            raise InvalidInput("constraints must be finite")
        norm = float(np.linalg.norm(a))
        if norm < 1e-12:
            if bound > region.tol:
                return False, None  # 0 >= positive bound can never hold
            continue  # trivially satisfied
        rows.append((a, float(bound), norm))

    if region.vertices_f.shape[0] == 0:
        return False, None
    if not rows:
        return True, region.vertices_f[0].copy()

    # variables (E_1..E_m, t): maximize t subject to region membership and
    # a.E >= b + t*|a| for every constraint
    n_rows = len(rows)
    masks = np.arange(1, 1 << m)
    indicators = ((masks[:, None] >> np.arange(m)[None, :]) & 1).astype(np.float64)
    a_ub = np.zeros(((1 << m) - 1 + n_rows, m + 1))
    b_ub = np.zeros((1 << m) - 1 + n_rows)
    a_ub[: indicators.shape[0], :m] = indicators
    b_ub[: indicators.shape[0]] = region.bounds
    for i, (a, bound, norm) in enumerate(rows):
        a_ub[indicators.shape[0] + i, :m] = -a
        a_ub[indicators.shape[0] + i, m] = norm
        b_ub[indicators.shape[0] + i] = -bound
    c = np.zeros(m + 1)
    c[m] = -1.0
    a_eq = np.concatenate([np.ones(m), [0.0]])[None, :]
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=[region.s_A],
        bounds=[(0, None)] * m + [(None, None)],
        method="highs",
    )
    if res.status != 0:
        return False, None
    if res.x[m] < -region.tol:
        return False, None
    return True, res.x[:m].copy()


def multipartite_volume_measure(state: PureState, alice: int = 0) -> float:
    """Region volume under the chosen distinguished party.

    Zero for degenerate regions, in particular whenever the state factors
    across a cut separating the Bobs into two groups.
    """
    return volume(build_region(build_table(with_alice(state, alice))))


def load_constraints(path: str) -> list[tuple[np.ndarray, float]]:
    """Parse a constraint file: [{"coeffs": [...], "lower_bound": ...}]."""
    payload = load_json(path)
    if not isinstance(payload, list):
        raise InvalidInput("constraint file must hold a JSON list")
    out = []
    for item in payload:
        try:
            coeffs = np.asarray([float(v) for v in item["coeffs"]], dtype=np.float64)
            bound = float(item["lower_bound"])
        except (TypeError, KeyError, ValueError) as exc:
            raise InvalidInput(f"bad constraint entry {item!r}: {exc}") from exc
        out.append((coeffs, bound))
    return out
