"""Error-correcting codes from k-resolving sets of graphs, decoded with
uncoverings built from covering designs."""

from .codec import (
    DecodeResult,
    ExperimentReport,
    GraphCode,
    build_code,
    channel,
    code_suite,
    decode,
    encode,
    grid_code_suite,
    min_distance,
    nearest_neighbor_oracle,
    simulate,
    sphere_intersection,
)
from .designs import (
    CoveringDesign,
    Uncovering,
    complement,
    greedy_covering,
    minimal_covering_bruteforce,
    petrov_covering,
    petrov_partition,
    schonheim_bound,
    uncovering_for_code,
    verify_covering,
    verify_uncovering,
)
from .errors import (
    ConstructionUnavailableError,
    DisconnectedGraphError,
    GraphCodesError,
    InstanceTooLargeError,
    InvalidParameterError,
    NoKResolvingSetError,
    NotKResolvingError,
    ParametersBelowThresholdError,
    UnsupportedKError,
)
from .graphs import (
    DistanceMatrix,
    Graph,
    all_pairs_distances,
    build_complete,
    build_custom,
    build_cycle,
    build_grid,
    build_path,
    sphere,
)
from .resolving import (
    DimensionReport,
    ResolvingSet,
    cycle_basis,
    dimension_report,
    distinctive_vertices,
    grid_basis,
    k_metric_dimension_bruteforce,
    metric_dimensionality,
    path_basis,
    verify_k_resolving,
)

__version__ = "0.1.0"
