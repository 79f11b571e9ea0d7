"""Multipartite pure states, reduced density matrices and entanglement entropy.

Conventions used throughout the package:

* Party 0 is the distinguished party ("Alice"); parties 1..m are the Bobs.
* Amplitude vectors are row-major over the party axes with party 0 slowest,
  i.e. ``amplitudes.reshape(layout.dims)`` gives the coefficient tensor.
* Party subsets are bitmasks with bit ``i`` standing for party ``i``.
* Entropies are in ebits (log base 2); one maximally entangled qubit pair
  carries exactly 1 ebit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptySubset,
    FullSubset,
    InvalidInput,
    InvalidSubset,
    NotDensityMatrix,
    NotNormalized,
    UnsupportedKind,
)
from .ioutil import canonical_json, load_json, write_text_atomic

NORM_ATOL = 1e-10
HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIG_ATOL = 1e-8  # eigenvalues below -EIG_ATOL mean bad input, above get clipped
MAX_TOTAL_DIM = 1 << 16

STANDARD_KINDS = ("ghz", "w", "product_pairs", "haar_random")


@dataclass(frozen=True)
class PartyLayout:
    """Ordered party labels and local dimensions; index 0 is Alice."""

    names: tuple[str, ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.dims):
            raise DimensionMismatch(
                f"{len(self.names)} names but {len(self.dims)} dimensions"
            )
        if len(self.dims) < 2:
            raise DimensionMismatch("need at least two parties (m >= 1)")
        if any(not isinstance(d, int) or d < 1 for d in self.dims):
            raise DimensionMismatch(f"local dimensions must be positive ints: {self.dims}")
        if self.total_dim > MAX_TOTAL_DIM:
            raise DimensionMismatch(
                f"total dimension {self.total_dim} exceeds the {MAX_TOTAL_DIM} guard"
            )

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def m(self) -> int:
        """Number of Bobs."""
        return len(self.dims) - 1

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def full_mask(self) -> int:
        return (1 << self.n_parties) - 1

    def subset_dim(self, subset: int) -> int:
        return math.prod(d for i, d in enumerate(self.dims) if (subset >> i) & 1)


def default_layout(m: int, dims) -> PartyLayout:
    """Layout named A, B1..Bm with the given per-party dimensions."""
    names = ("A",) + tuple(f"B{k}" for k in range(1, m + 1))
    return PartyLayout(names=names, dims=tuple(int(d) for d in dims))


@dataclass(frozen=True)
class PureState:
    """Normalized pure state over a :class:`PartyLayout`."""

    layout: PartyLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.layout.total_dim,):
            raise DimensionMismatch(
                f"expected {self.layout.total_dim} amplitudes, got {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise NotNormalized("amplitudes contain non-finite values")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise NotNormalized(f"squared norm {norm2} is not 1 within {NORM_ATOL}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """Reduced state on a party subset (bitmask over all parties)."""

    subset: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise NotDensityMatrix(f"matrix shape {mat.shape} is not square")
        if np.abs(mat - mat.conj().T).max() > HERMITIAN_ATOL:
            raise NotDensityMatrix("matrix is not Hermitian within 1e-10")
        trace = float(np.trace(mat).real)
        if abs(trace - 1.0) > TRACE_ATOL:
            raise NotDensityMatrix(f"trace {trace} is not 1 within 1e-10")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def make_state(layout: PartyLayout, amplitudes, renormalize: bool = False) -> PureState:
    """Validate an amplitude vector against a layout and wrap it.

    With ``renormalize`` the vector is scaled to unit norm instead of being
    rejected (vectors of norm ~0 are always rejected).
    """
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.shape != (layout.total_dim,):
        raise DimensionMismatch(
            f"layout holds {layout.total_dim} amplitudes, got {amps.size}"
        )
    if not np.all(np.isfinite(amps)):
        raise NotNormalized("amplitudes contain non-finite values")
    if renormalize:
        norm = float(np.linalg.norm(amps))
        if norm < 1e-12:
            raise NotNormalized("amplitude vector has (near-)zero norm")
        amps = amps / norm
    return PureState(layout=layout, amplitudes=amps)


def standard_state(kind: str, m: int, local_dim: int = 2, seed: int | None = None) -> PureState:
    """Construct one of the standard state families.

    kind:
        ``ghz``            uniform superposition of |j...j> over all parties
        ``w``              qubits, uniform over the weight-one basis states
        ``product_pairs``  Alice holds one maximally entangled pair with
                           every Bob (her local dimension is local_dim**m)
        ``haar_random``    normalized complex Gaussian vector; ``seed`` is
                           required so runs are reproducible
    """
    kind = kind.lower()
    if kind not in STANDARD_KINDS:
        raise UnsupportedKind(f"unknown kind {kind!r}; expected one of {STANDARD_KINDS}")
    if m < 1:
        raise DimensionMismatch(f"need m >= 1 Bobs, got {m}")
    if local_dim < 2:
        raise UnsupportedKind(f"{kind} needs local_dim >= 2, got {local_dim}")

    if kind == "ghz":
        layout = default_layout(m, [local_dim] * (m + 1))
        amps = np.zeros(layout.dims, dtype=np.complex128)
        for j in range(local_dim):
            amps[(j,) * (m + 1)] = 1.0 / math.sqrt(local_dim)
        return PureState(layout, amps.reshape(-1))

    if kind == "w":
        if local_dim != 2:
            raise UnsupportedKind("the W family is defined for qubits (local_dim=2)")
        layout = default_layout(m, [2] * (m + 1))
        amps = np.zeros(layout.total_dim, dtype=np.complex128)
        for i in range(m + 1):
            amps[1 << (m - i)] = 1.0 / math.sqrt(m + 1)  # party i excited
        return PureState(layout, amps)

    if kind == "product_pairs":
        layout = default_layout(m, [local_dim**m] + [local_dim] * m)
        d = local_dim
        # tensor over (a_1..a_m, b_1..b_m), then merge Alice's registers
        tensor = np.ones((), dtype=np.complex128)
        for _ in range(m):
            pair = np.eye(d, dtype=np.complex128) / math.sqrt(d)
            tensor = np.tensordot(tensor, pair, axes=0)
        # axes currently (a_1, b_1, a_2, b_2, ...) -> (a_1..a_m, b_1..b_m)
        order = [2 * k for k in range(m)] + [2 * k + 1 for k in range(m)]
        tensor = np.transpose(tensor, order)
        return PureState(layout, tensor.reshape(-1))

    if seed is None:
        raise UnsupportedKind("haar_random requires an explicit seed")
    layout = default_layout(m, [local_dim] * (m + 1))
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(layout.total_dim) + 1j * rng.standard_normal(layout.total_dim)
    return make_state(layout, z, renormalize=True)


def reduced_density(state: PureState, subset: int) -> DensityMatrix:
    """Partial trace onto ``subset`` (bitmask over all parties)."""
    layout = state.layout
    n = layout.n_parties
    if subset == 0:
        raise EmptySubset("cannot reduce onto the empty subset")
    if subset & ~layout.full_mask:
        raise InvalidSubset(f"mask {bin(subset)} has bits beyond party {n - 1}")
    if subset == layout.full_mask:
        raise FullSubset("subset covers all parties; the state is already pure")
    keep = [i for i in range(n) if (subset >> i) & 1]
    rest = [i for i in range(n) if not (subset >> i) & 1]
    tensor = state.as_tensor().transpose(keep + rest)
    d_keep = layout.subset_dim(subset)
    mat = tensor.reshape(d_keep, -1)
    rho = mat @ mat.conj().T
    return DensityMatrix(subset=subset, matrix=rho)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy of a reduced state in ebits; -sum(lam * log2 lam), 0 log 0 = 0.

    Eigenvalues in [-1e-8, 0) are treated as roundoff and clipped to zero;
    anything below -1e-8 (or trace off by more than 1e-8) raises
    :class:`NotDensityMatrix`.
    """
    w = np.linalg.eigvalsh(rho.matrix)
    if w[0] < -EIG_ATOL:
        raise NotDensityMatrix(f"eigenvalue {w[0]} below -{EIG_ATOL}")
    if abs(float(w.sum()) - 1.0) > EIG_ATOL:
        raise NotDensityMatrix(f"eigenvalue sum {w.sum()} is not 1 within {EIG_ATOL}")
    w = w[w > 1e-12]
    s = float(-(w * np.log2(w)).sum())
    return max(s, 0.0)


def subset_entropy(state: PureState, subset: int) -> float:
    """Entropy of a party subset, tracing whichever side is smaller.

    Valid because the complement of a subset of a pure state has the same
    entropy.
    """
    complement = state.layout.full_mask & ~subset
    if subset == 0 or complement == 0:
        return 0.0
    if state.layout.subset_dim(subset) <= state.layout.subset_dim(complement):
        return von_neumann_entropy(reduced_density(state, subset))
    return von_neumann_entropy(reduced_density(state, complement))


def permute_parties(state: PureState, order) -> PureState:
    """Reorder parties; ``order[i]`` is the old index of new party ``i``."""
    layout = state.layout
    order = list(order)
    if sorted(order) != list(range(layout.n_parties)):
        raise DimensionMismatch(f"{order} is not a permutation of the party indices")
    new_layout = PartyLayout(
        names=tuple(layout.names[i] for i in order),
        dims=tuple(layout.dims[i] for i in order),
    )
    tensor = state.as_tensor().transpose(order)
    return PureState(new_layout, tensor.reshape(-1))


def with_alice(state: PureState, alice: int) -> PureState:
    """Move party ``alice`` to index 0; the rest keep their relative order."""
    n = state.layout.n_parties
    if not 0 <= alice < n:
        raise DimensionMismatch(f"party index {alice} out of range for {n} parties")
    if alice == 0:
        return state
    order = [alice] + [i for i in range(n) if i != alice]
    return permute_parties(state, order)


def state_to_payload(state: PureState) -> dict:
    return {
        "parties": [
            {"name": name, "dim": dim}
            for name, dim in zip(state.layout.names, state.layout.dims)
        ],
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def state_from_payload(payload) -> PureState:
    if not isinstance(payload, dict) or "parties" not in payload or "amplitudes" not in payload:
        raise InvalidInput("state payload needs 'parties' and 'amplitudes'")
    try:
        names = tuple(str(p["name"]) for p in payload["parties"])
        dims = tuple(int(p["dim"]) for p in payload["parties"])
        pairs = [(float(re), float(im)) for re, im in payload["amplitudes"]]
    except (TypeError, ValueError, KeyError) as exc:
        raise InvalidInput(f"bad state payload: {exc}") from exc
    if any(not (math.isfinite(re) and math.isfinite(im)) for re, im in pairs):
        raise InvalidInput("state payload contains non-finite amplitudes")
    layout = PartyLayout(names=names, dims=dims)
    amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return make_state(layout, amps)


def save_state(state: PureState, path: str) -> None:
    write_text_atomic(path, canonical_json(state_to_payload(state)))


def load_state(path: str) -> PureState:
    return state_from_payload(load_json(path))
