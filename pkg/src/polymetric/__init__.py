"""Multi-metric spaces, metric combinators, sequence analysis and a
multi-seed contraction solver."""

from .errors import (
    AxiomViolationError,
    ConfigurationError,
    DimensionError,
    MapUndefinedError,
    MathematicalError,
    NestingError,
    NoConvergenceError,
    NotAContractionError,
    PolymetricError,
    PreconditionError,
    ResidualIncomparableError,
)
from .fixedpoint import (
    ContractionEstimate,
    FixedPoint,
    FixedPointReport,
    RoutingTable,
    banach_solve,
    estimate_contraction,
    solve,
    verify_fixed_point,
)
from .maps import (
    Affine,
    AffineForm,
    ContractionMap,
    Coordinatewise,
    CosineForm,
    Piecewise,
    RationalForm,
    SineForm,
    apply_map,
    iterate,
)
from .metrics import (
    AxiomReport,
    BoundedTransform,
    Chebyshev,
    Combinator,
    Combined,
    ConditionReport,
    Discrete,
    Euclidean,
    Manhattan,
    Max,
    Metric,
    Sum,
    WeightedEuclidean,
    WeightedSum,
    as_point,
    check_combinator_conditions,
    check_metric_axioms,
    combine,
    eval_metric,
)
from .sequences import (
    CauchyReport,
    ConvergenceReport,
    Explicit,
    Iterated,
    Verdict,
    classify_convergence,
    eventual_component,
    is_cauchy,
    limit_metric_consistency,
    nested_disk_intersection,
)
from .space import (
    INCOMPARABLE,
    Ball,
    Box,
    Comparable,
    ComponentSpace,
    DiskSpec,
    Incomparable,
    MultiMetricSpace,
    Whole,
    bounding_disk,
    components_of,
    distance,
    in_disk,
)

__version__ = "0.1.0"
