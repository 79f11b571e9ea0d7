"""Rate lower bounds, region overlap and the volume measure."""

from __future__ import annotations

import math

import numpy as np
import pytest

import oracles
from conftest import (
    apply_local_unitary,
    double_pair_alice_state,
    pair_product_state,
    random_pure_state,
    random_unitary,
    relabel_bobs,
    tensor_two_copies,
)
from entcomb import (
    DimensionMismatch,
    PartyMismatch,
    ZeroTarget,
    best_rate_over_parties,
    build_region,
    build_table,
    contains,
    default_layout,
    make_state,
    multipartite_volume_measure,
    rate_lower_bound,
    region_overlap,
    standard_state,
    with_alice,
)

# --- rate lower bound -------------------------------------------------------


def test_rate_ghz_to_ghz():
    ghz = standard_state("ghz", 2)
    bound = rate_lower_bound(ghz, ghz)
    assert bound.r == pytest.approx(0.5, abs=1e-9)
    assert bound.binding_subset == 0b11
    assert bound.alice_choice == 0


def test_rate_ghz_to_bell_with_spectator():
    ghz = standard_state("ghz", 2)
    amps = np.zeros((2, 2, 2), dtype=complex)
    amps[0, 0, 0] = amps[1, 1, 0] = 1 / math.sqrt(2)  # Bell(A,B1) x |0>_B2
    target = make_state(default_layout(2, (2, 2, 2)), amps.reshape(-1))
    bound = rate_lower_bound(ghz, target)
    assert bound.r == pytest.approx(1.0, abs=1e-9)
    assert bound.binding_subset == 0b01


def test_rate_bell_to_bell_identity():
    bell = standard_state("ghz", 1)
    bound = rate_lower_bound(bell, bell)
    assert bound.r == pytest.approx(1.0, abs=1e-9)
    assert bound.binding_subset == 0b1


def test_rate_requires_matching_party_count():
    with pytest.raises(PartyMismatch):
        rate_lower_bound(standard_state("ghz", 2), standard_state("ghz", 3))


def test_rate_zero_target_rejected():
    ghz = standard_state("ghz", 2)
    amps = np.zeros(8)
    amps[0] = 1.0
    product = make_state(default_layout(2, (2, 2, 2)), amps)
    with pytest.raises(ZeroTarget):
        rate_lower_bound(ghz, product)


def test_rate_zero_for_unentangled_source():
    amps = np.zeros(8)
    amps[0] = 1.0
    product = make_state(default_layout(2, (2, 2, 2)), amps)
    bound = rate_lower_bound(product, standard_state("ghz", 2))
    assert bound.r == 0.0


@pytest.mark.parametrize("seed", range(12))
def test_rate_formula_matches_lp_oracle(seed):
    rng = np.random.default_rng(1400 + seed)
    m = int(rng.integers(2, 4))
    dims_src = tuple(rng.integers(2, 4, size=m + 1))
    dims_tgt = tuple(rng.integers(2, 4, size=m + 1))
    source = random_pure_state(dims_src, seed=2000 + seed)
    target = random_pure_state(dims_tgt, seed=3000 + seed)
    bound = rate_lower_bound(source, target)
    table = build_table(source)
    marginals = [
        oracles.subset_entropy_bruteforce(target, [k]) for k in range(1, m + 1)
    ]
    lp_r = oracles.max_rate_lp(table.values, m, marginals)
    assert bound.r == pytest.approx(lp_r, abs=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_rate_scaled_target_lies_in_down_closure(seed):
    source = random_pure_state((2, 2, 2), seed=1500 + seed)
    target = random_pure_state((2, 2, 2), seed=1600 + seed)
    bound = rate_lower_bound(source, target)
    marginals = np.array(
        [oracles.subset_entropy_bruteforce(target, [k]) for k in (1, 2)]
    )
    region = build_region(build_table(source))
    assert contains(region, bound.r * marginals, mode="down_closure")[0]
    if bound.r > 0:
        scaled = (1 + 1e-6) * bound.r * marginals
        assert not contains(region, scaled, mode="down_closure", tol=1e-9)[0]


def test_rate_two_copies_halves_r():
    source = random_pure_state((2, 2, 2), seed=71)
    target = random_pure_state((2, 2, 2), seed=72)
    single = rate_lower_bound(source, target)
    doubled = rate_lower_bound(source, tensor_two_copies(target))
    assert doubled.r == pytest.approx(single.r / 2, rel=1e-12)


# --- best choice of distinguished party --------------------------------------


def test_best_rate_ghz_symmetric():
    ghz = standard_state("ghz", 2)
    bound = best_rate_over_parties(ghz, ghz)
    assert bound.r == pytest.approx(0.5, abs=1e-9)
    assert bound.alice_choice == 0  # ties break to the lowest index


def test_best_rate_double_pair_fixture_is_zero():
    # A-B1 and B2-B3 pairs: combing at any single party severs one pair,
    # so no positive rate survives; the LP oracle confirms every choice.
    state = pair_product_state((2, 2, 2, 2), [(0, 1), (2, 3)])
    bound = best_rate_over_parties(state, state)
    assert bound.r == pytest.approx(0.0, abs=1e-12)
    for alice in range(4):
        per_choice = rate_lower_bound(state, state, alice=alice)
        rooted = with_alice(state, alice)
        table = build_table(rooted)
        marginals = [
            oracles.subset_entropy_bruteforce(state, [q]) for q in range(4) if q != alice
        ]
        assert per_choice.r == pytest.approx(
            oracles.max_rate_lp(table.values, 3, marginals), abs=1e-9
        )


@pytest.mark.parametrize("seed", range(4))
def test_best_rate_dominates_each_choice(seed):
    source = random_pure_state((2, 3, 2), seed=1700 + seed)
    target = random_pure_state((2, 2, 2), seed=1800 + seed)
    best = best_rate_over_parties(source, target)
    rates = [rate_lower_bound(source, target, alice=a).r for a in range(3)]
    assert best.r == pytest.approx(max(rates), abs=1e-12)
    assert best.alice_choice == int(np.argmax(np.round(rates, 12)))


def test_best_rate_zero_target():
    ghz = standard_state("ghz", 2)
    amps = np.zeros(8)
    amps[0] = 1.0
    product = make_state(default_layout(2, (2, 2, 2)), amps)
    with pytest.raises(ZeroTarget):
        best_rate_over_parties(ghz, product)


# --- region overlap -----------------------------------------------------------


def test_overlap_ghz_feasible_with_witness():
    region = build_region(build_table(standard_state("ghz", 2)))
    feasible, witness = region_overlap(
        region, [(np.array([1.0, 0.0]), 0.4), (np.array([0.0, 1.0]), 0.4)]
    )
    assert feasible
    np.testing.assert_allclose(witness, [0.5, 0.5], atol=1e-9)


def test_overlap_infeasible_beyond_total():
    region = build_region(build_table(standard_state("ghz", 2)))
    feasible, witness = region_overlap(region, [(np.array([1.0, 0.0]), 2.0)])
    assert not feasible and witness is None


def test_overlap_empty_constraints_yield_vertex():
    region = build_region(build_table(standard_state("ghz", 2)))
    feasible, witness = region_overlap(region, [])
    assert feasible
    assert any(np.allclose(witness, v) for v in region.vertices_f)


def test_overlap_zero_coefficient_rows():
    region = build_region(build_table(standard_state("ghz", 2)))
    assert region_overlap(region, [(np.zeros(2), -1.0)])[0]
    assert not region_overlap(region, [(np.zeros(2), 0.5)])[0]


def test_overlap_witness_satisfies_everything():
    region = build_region(build_table(standard_state("ghz", 3)))
    constraints = [(np.array([1.0, 1.0, 0.0]), 0.5), (np.array([0.0, 0.0, 1.0]), 0.2)]
    feasible, witness = region_overlap(region, constraints)
    assert feasible
    assert contains(region, witness)[0]
    for coeffs, bound in constraints:
        assert coeffs @ witness >= bound - 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_overlap_monotone_under_extra_constraints(seed):
    rng = np.random.default_rng(1900 + seed)
    region = build_region(build_table(random_pure_state((2, 2, 2), seed=1900 + seed)))
    constraints = []
    feasible_history = []
    for _ in range(4):
        constraints.append((rng.normal(size=2), rng.uniform(-0.5, 0.8)))
        feasible_history.append(region_overlap(region, list(constraints))[0])
    # once infeasible, more constraints never make it feasible again
    for earlier, later in zip(feasible_history, feasible_history[1:]):
        assert earlier or not later


def test_overlap_rejects_bad_constraint_length():
    region = build_region(build_table(standard_state("ghz", 2)))
    with pytest.raises(DimensionMismatch):
        region_overlap(region, [(np.array([1.0, 0.0, 0.0]), 0.1)])


# --- volume measure -----------------------------------------------------------


def test_volume_measure_fixtures():
    assert multipartite_volume_measure(standard_state("ghz", 2)) == pytest.approx(
        math.sqrt(2), abs=1e-8
    )
    assert multipartite_volume_measure(double_pair_alice_state()) == 0.0
    amps = np.zeros(8)
    amps[0] = 1.0
    product = make_state(default_layout(2, (2, 2, 2)), amps)
    assert multipartite_volume_measure(product) == 0.0


@pytest.mark.parametrize("seed", range(3))
def test_volume_measure_invariances(seed):
    rng = np.random.default_rng(2100 + seed)
    state = random_pure_state((2, 2, 2), seed=2100 + seed)
    base = multipartite_volume_measure(state)
    party = int(rng.integers(0, 3))
    rotated = apply_local_unitary(state, party, random_unitary(2, rng))
    assert multipartite_volume_measure(rotated) == pytest.approx(base, abs=1e-8)
    relabeled = relabel_bobs(state, rng.permutation(2) + 1)
    assert multipartite_volume_measure(relabeled) == pytest.approx(base, abs=1e-8)


def test_volume_measure_respects_alice_choice():
    # A-B1 pair with a spectator: rooted at B2 the region is a point at 0
    amps = np.zeros((2, 2, 2), dtype=complex)
    amps[0, 0, 0] = amps[1, 1, 0] = 1 / math.sqrt(2)
    state = make_state(default_layout(2, (2, 2, 2)), amps.reshape(-1))
    assert multipartite_volume_measure(state, alice=0) == 0.0
    assert multipartite_volume_measure(state, alice=2) == 0.0
