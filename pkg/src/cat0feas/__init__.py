"""Convex feasibility in CAT(0) spaces via averaged firmly nonexpansive maps.

The library builds concrete geodesic spaces (Euclidean, finite metric trees,
the Poincare disk, and weighted products), metric projections onto convex
sets, Picard iteration of averaged or composed projections, explicit
asymptotic-regularity rate formulas with trace certification, and
best-approximation-pair oracles.
"""

from .analysis import (
    AsymptoticCenterEstimate,
    BestPairResult,
    DeltaLimitCheck,
    best_pair_bruteforce,
    check_delta_limit,
    estimate_asymptotic_center,
    set_distance,
)
from .config import (
    ExperimentConfig,
    InstanceConfig,
    load_bundled_config,
    load_config,
)
from .errors import (
    Cat0FeasError,
    ConfigError,
    DomainError,
    InconclusiveError,
    NotDiagonalError,
    NumericError,
    SolverError,
    SpaceMismatchError,
)
from .iteration import (
    IterationTrace,
    RateCertificate,
    asymptotic_regularity_rate,
    averaged_projection_gap_rate,
    certify_asymptotic_regularity,
    certify_best_approx_rate,
    composed_projection_gap_rate,
    picard,
    regularity_stage_count,
)
from .mappings import (
    ComposeMap,
    ConstantMap,
    ConvexCombinationMap,
    IdentityMap,
    Mapping,
    PairMap,
    ProjectionMap,
    averaged_projections,
    check_firmly_nonexpansive,
    check_p2,
    diagonal_projection,
    evaluate,
    fixed_point_residual,
)
from .product import (
    ConvexCombinationSpace,
    diagonal_combination,
    embed_diagonal,
    extract_diagonal,
    lift_best_pair,
    reduction_deviations,
    squared_diagonal_gap,
)
from .sets import (
    AffineSubspace,
    ConvexSet,
    DiagonalSet,
    DiskBall,
    DiskGeodesicSegment,
    EuclideanBall,
    GridSpec,
    Halfspace,
    ProductRectangle,
    Subtree,
    TreeSegment,
)
from .spaces import (
    CheckResult,
    EuclideanSpace,
    PoincareDiskSpace,
    Point,
    Space,
    check_cn_inequality,
    check_four_point,
    distance,
    interpolate,
)
from .trees import MetricTree, TreeSpace, tripod

__version__ = "0.1.0"

__all__ = [
    "AffineSubspace",
    "AsymptoticCenterEstimate",
    "BestPairResult",
    "Cat0FeasError",
    "CheckResult",
    "ComposeMap",
    "ConfigError",
    "ConstantMap",
    "ConvexCombinationMap",
    "ConvexCombinationSpace",
    "ConvexSet",
    "DeltaLimitCheck",
    "DiagonalSet",
    "DiskBall",
    "DiskGeodesicSegment",
    "DomainError",
    "EuclideanBall",
    "EuclideanSpace",
    "ExperimentConfig",
    "GridSpec",
    "Halfspace",
    "IdentityMap",
    "InconclusiveError",
    "InstanceConfig",
    "IterationTrace",
    "Mapping",
    "MetricTree",
    "NotDiagonalError",
    "NumericError",
    "PairMap",
    "PoincareDiskSpace",
    "Point",
    "ProductRectangle",
    "ProjectionMap",
    "RateCertificate",
    "SolverError",
    "Space",
    "SpaceMismatchError",
    "Subtree",
    "TreeSegment",
    "TreeSpace",
    "asymptotic_regularity_rate",
    "averaged_projection_gap_rate",
    "averaged_projections",
    "best_pair_bruteforce",
    "certify_asymptotic_regularity",
    "certify_best_approx_rate",
    "check_cn_inequality",
    "check_delta_limit",
    "check_firmly_nonexpansive",
    "check_four_point",
    "check_p2",
    "composed_projection_gap_rate",
    "diagonal_combination",
    "diagonal_projection",
    "distance",
    "embed_diagonal",
    "estimate_asymptotic_center",
    "evaluate",
    "extract_diagonal",
    "fixed_point_residual",
    "interpolate",
    "lift_best_pair",
    "load_bundled_config",
    "load_config",
    "picard",
    "reduction_deviations",
    "regularity_stage_count",
    "set_distance",
    "squared_diagonal_gap",
    "tripod",
]
