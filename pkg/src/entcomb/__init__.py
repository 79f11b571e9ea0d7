"""entcomb: split a distinguished party's multipartite entanglement into
bipartite pairs and work with the polytope of achievable distributions.

The public surface re-exports the main types and operations; see the
module docstrings for conventions (party ordering, bitmasks, ebits).
"""

from .bounds import (
    RateBound,
    best_rate_over_parties,
    load_constraints,
    multipartite_volume_measure,
    rate_lower_bound,
    region_overlap,
)
from .entropy import (
    SsaReport,
    SubsetEntropyTable,
    build_table,
    check_strong_subadditivity,
    load_table,
    merging_cost,
    save_table,
    table_from_payload,
    table_to_payload,
)
from .errors import (
    BadPermutation,
    DimensionMismatch,
    EmptySubset,
    EntcombError,
    FullSubset,
    InvalidInput,
    InvalidSubset,
    NotAmplifying,
    NotDensityMatrix,
    NotNormalized,
    PartyMismatch,
    PointOutsideRegion,
    TableInvalid,
    UnsupportedKind,
    ZeroBorrow,
    ZeroTarget,
)
from .ledger import (
    CaratheodoryDecomposition,
    CombStep,
    LedgerReport,
    LedgerRound,
    breeding_schedule,
    caratheodory_decompose,
    greedy_comb,
    ledger_csv,
)
from .region import (
    CombingRegion,
    Witness,
    affine_dimension,
    build_region,
    contains,
    corner_point,
    degenerate,
    load_region,
    region_from_payload,
    region_to_payload,
    region_vertices_csv,
    save_region,
    volume,
)
from .states import (
    DensityMatrix,
    PartyLayout,
    PureState,
    default_layout,
    load_state,
    make_state,
    permute_parties,
    reduced_density,
    save_state,
    standard_state,
    state_from_payload,
    state_to_payload,
    subset_entropy,
    von_neumann_entropy,
    with_alice,
)

__version__ = "0.1.0"
