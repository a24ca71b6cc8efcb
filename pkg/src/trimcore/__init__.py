"""Trimming of finite pseudometric spaces, trim cores and metric forests."""
from .errors import (
    AxiomViolation,
    BadDepth,
    BaseMismatch,
    DriftTooNegative,
    EmptySpace,
    InvalidForest,
    InvalidTree,
    NoLeaves,
    SizeBound,
    TooSmall,
    TrimcoreError,
    UnknownPoint,
    UnknownVertex,
)
from .forest import (
    LeafSpaceResult,
    MetricForest,
    MetricTree,
    RootedMetricTree,
    canonical_forest,
    canonical_forest_for_theorem1,
    compose_forests,
    contiguous_leaves,
    forest_bullet,
    is_reduced,
    leaf_space,
    leaf_space_unrooted,
    reduce_forest,
    reduce_tree,
    rooted_leaf_space,
    rooted_to_unrooted,
    segment_forest,
    tree_bullet,
    tree_path_metric,
)
from .metric import (
    PseudometricSpace,
    QuotientMap,
    as_rational,
    d_bullet,
    drift,
    find_isometry,
    format_rational,
    gromov,
    is_trim,
    metric_quotient,
    underline_d,
    underline_d_short,
    validate_space,
)
from .trimming import (
    QuotientStep,
    TrimChain,
    admissible_shift,
    related_oracle,
    symmetric_trimming,
    trim_core,
    trim_step,
    trim_symmetric,
)

__version__ = "0.1.0"
