"""cubecount: exact and asymptotic counting of independent sets in Q_d.

The package splits into a small stack of layers:

- hypercube: vertex/bitmask combinatorics of Q_d
- exact: brute-force oracles (size profiles, restricted models) for small d
- polymers: enumeration and classification of connected odd defects
- clusters: cluster-expansion machinery (Ursell coefficients, strata sums)
- symbolic: exact polynomial / rational-function / truncated-series kernel
- asymptotics: series coefficients and high-precision counting formulas
- sampler: Glauber dynamics used to validate the defect statistics
- cli: command-line front end
"""

from .errors import BudgetExceededError, InterpolationError, RegimeWarning
from .hypercube import (
    MAX_DIM,
    closure,
    even_side,
    is_independent,
    n_side,
    neighborhood,
    neighbors,
    odd_side,
    parity,
    square_components,
    square_neighbors,
)
from .exact import (
    HardcoreExact,
    OddModelProfile,
    SizeProfile,
    achievable_independent_sets,
    hardcore_exact,
    independence_poly,
    odd_model_exact,
    size_profile,
    size_profile_exhaustive,
)
from .polymers import (
    Census,
    DefectType,
    Polymer,
    SymbolicCensus,
    census,
    classify,
    enumerate_polymers,
    symbolic_census,
)
from .clusters import (
    Cluster,
    ClusterSum,
    Observable,
    abstract_cluster_log,
    abstract_log_direct,
    cluster_sum,
    enumerate_clusters,
    expected_size_truncated,
    log_xi_series,
    stratum_partial_sum,
    stratum_value,
    truncated_log_xi,
    ursell,
    ursell_recursive,
)
from .symbolic import RatFunc, RatPoly, TruncSeries, interpolate_poly
from .asymptotics import (
    LambdaBeta,
    LogCount,
    R_poly,
    R_table,
    SeriesTable,
    binomial_lclt,
    compute_B,
    compute_P,
    lambda_beta,
    log_Z_asymptotic,
    log_count_asymptotic,
    stirling_binom,
    structured_count,
)
from .sampler import (
    ChainState,
    DefectReport,
    SamplerSummary,
    defect_statistics,
    extract_defects,
    glauber_run,
    sample_chains,
    two_chain_diagnostic,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "InterpolationError",
    "RegimeWarning",
    "MAX_DIM",
    "closure",
    "even_side",
    "is_independent",
    "n_side",
    "neighborhood",
    "neighbors",
    "odd_side",
    "parity",
    "square_components",
    "square_neighbors",
    "HardcoreExact",
    "OddModelProfile",
    "SizeProfile",
    "achievable_independent_sets",
    "hardcore_exact",
    "independence_poly",
    "odd_model_exact",
    "size_profile",
    "size_profile_exhaustive",
    "Census",
    "DefectType",
    "Polymer",
    "SymbolicCensus",
    "census",
    "classify",
    "enumerate_polymers",
    "symbolic_census",
    "Cluster",
    "ClusterSum",
    "Observable",
    "abstract_cluster_log",
    "abstract_log_direct",
    "cluster_sum",
    "enumerate_clusters",
    "expected_size_truncated",
    "log_xi_series",
    "stratum_partial_sum",
    "stratum_value",
    "truncated_log_xi",
    "ursell",
    "ursell_recursive",
    "RatFunc",
    "RatPoly",
    "TruncSeries",
    "interpolate_poly",
    "LambdaBeta",
    "LogCount",
    "R_poly",
    "R_table",
    "SeriesTable",
    "binomial_lclt",
    "compute_B",
    "compute_P",
    "lambda_beta",
    "log_Z_asymptotic",
    "log_count_asymptotic",
    "stirling_binom",
    "structured_count",
    "ChainState",
    "DefectReport",
    "SamplerSummary",
    "defect_statistics",
    "extract_defects",
    "glauber_run",
    "sample_chains",
    "two_chain_diagnostic",
    "__version__",
]
