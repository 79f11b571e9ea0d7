"""Shared state-construction helpers for the test suite."""

from __future__ import annotations

import math

import numpy as np

from entcomb import PureState, default_layout, make_state, permute_parties


def random_pure_state(dims, seed) -> PureState:
    """Gaussian amplitudes, normalized; supports heterogeneous dimensions."""
    dims = tuple(int(d) for d in dims)
    layout = default_layout(len(dims) - 1, dims)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(layout.total_dim) + 1j * rng.standard_normal(layout.total_dim)
    return make_state(layout, z, renormalize=True)


def pair_product_state(dims, pairs) -> PureState:
    """Product of maximally entangled pairs between the given party slots.

    ``pairs`` are (i, j) party-index tuples; unpaired parties sit in |0>.
    Paired parties must share their dimension.
    """
    dims = tuple(int(d) for d in dims)
    paired = [p for ij in pairs for p in ij]
    assert len(set(paired)) == len(paired), "each party may appear in one pair"
    tensor = np.zeros(dims, dtype=complex)
    for idx in np.ndindex(*dims):
        amp = 1.0
        for i, j in pairs:
            if idx[i] != idx[j]:
                amp = 0.0
                break
            amp /= math.sqrt(dims[i])
        for p in range(len(dims)):
            if p not in paired and idx[p] != 0:
                amp = 0.0
                break
        if amp:
            tensor[idx] = amp
    return make_state(default_layout(len(dims) - 1, dims), tensor.reshape(-1))


def epr_mix_state() -> PureState:
    """EPR between B1 and B2 tensored with EPR between A and B3."""
    return pair_product_state((2, 2, 2, 2), [(1, 2), (0, 3)])


def double_pair_alice_state() -> PureState:
    """Alice (dim 4) holds one half of an EPR pair with each of two Bobs.

    Product across the cut separating B1 from B2, so the region degenerates
    to the single point (1, 1).
    """
    bell = np.array([1, 0, 0, 1], dtype=complex).reshape(2, 2) / math.sqrt(2)
    tensor = np.einsum("ab,cd->acbd", bell, bell)  # (A, A', B1, B2)
    return make_state(default_layout(2, (4, 2, 2)), tensor.reshape(-1))


def random_unitary(dim: int, rng) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def apply_local_unitary(state: PureState, party: int, u: np.ndarray) -> PureState:
    tensor = state.as_tensor()
    tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [party])), 0, party)
    return make_state(state.layout, tensor.reshape(-1))


def relabel_bobs(state: PureState, bob_order) -> PureState:
    """Permute the Bobs; ``bob_order[k]`` is the old Bob index of new B_{k+1}."""
    return permute_parties(state, [0] + [int(b) for b in bob_order])


def tensor_two_copies(state: PureState) -> PureState:
    """|psi> x |psi> with each party holding both of its shares."""
    dims = state.layout.dims
    n = len(dims)
    t = np.tensordot(state.as_tensor(), state.as_tensor(), axes=0)
    order = [axis for p in range(n) for axis in (p, n + p)]
    t = t.transpose(order)
    new_dims = tuple(d * d for d in dims)
    return make_state(default_layout(n - 1, new_dims), t.reshape(-1))
