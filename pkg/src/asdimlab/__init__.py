"""Certified asymptotic-dimension bounds for manifold fundamental groups.

The package derives interval bounds on the asymptotic dimension of
fundamental groups built from geometric pieces (closed geometric
manifolds in dimensions three and four, graph-of-groups decompositions,
connected sums, and three-dimensional Alexandrov spaces), records every
derivation as a replayable trace, and includes a small laboratory for
finite-scale cover experiments in Cayley balls.
"""

from .bounds import (
    FINITE_UNKNOWN,
    UNKNOWN,
    DimBound,
    ExtendedDim,
    InconsistentBoundError,
    finite,
)
from .coarse import (
    BallBudgetError,
    CoverReport,
    CoverWitness,
    FiniteMetricSpace,
    GroupSpec,
    SearchResult,
    WitnessFormatError,
    brick_cover,
    cayley_ball,
    format_witness,
    min_families_exhaustive,
    parse_group_spec,
    parse_witness,
    verify_cover,
)
from .engine import (
    BoundResult,
    Consequence,
    MalformedTraceError,
    ProofTrace,
    Rule,
    RuleArityError,
    TraceStep,
    UnknownRuleError,
    apply_rule,
    bound,
    consequences,
    list_rules,
    parse_trace,
    replay,
    serialize_trace,
)
from .geometries import (
    GeometryFact,
    UnknownGeometryError,
    UnsupportedDimensionError,
    lookup_geometry,
    list_geometries,
)
from .groups import (
    Amalgam,
    CanonicalFormError,
    Extension,
    Finite,
    FreeAbelian,
    FreeProduct,
    GroupExpr,
    HNN,
    HyperbolicGroup,
    InfinitenessStatus,
    Lattice,
    Product,
    ProperActionOn,
    RelHyperbolic,
    SurfaceGroup,
    Trivial,
    Union,
    is_infinite,
    normalize,
    parse_canonical,
    to_canonical,
)
from .manifolds import (
    AsphericityVerdict,
    CompileResult,
    ManifoldDesc,
    ManifoldParseError,
    OutsideClassifiedCasesError,
    compile,
    connected_sum_with_handles,
    parse_manifold,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "FINITE_UNKNOWN",
    "UNKNOWN",
    "DimBound",
    "ExtendedDim",
    "InconsistentBoundError",
    "finite",
    "BallBudgetError",
    "CoverReport",
    "CoverWitness",
    "FiniteMetricSpace",
    "GroupSpec",
    "SearchResult",
    "WitnessFormatError",
    "brick_cover",
    "cayley_ball",
    "format_witness",
    "min_families_exhaustive",
    "parse_group_spec",
    "parse_witness",
    "verify_cover",
    "BoundResult",
    "Consequence",
    "MalformedTraceError",
    "ProofTrace",
    "Rule",
    "RuleArityError",
    "TraceStep",
    "UnknownRuleError",
    "apply_rule",
    "bound",
    "consequences",
    "list_rules",
    "parse_trace",
    "replay",
    "serialize_trace",
    "GeometryFact",
    "UnknownGeometryError",
    "UnsupportedDimensionError",
    "lookup_geometry",
    "list_geometries",
    "Amalgam",
    "CanonicalFormError",
    "Extension",
    "Finite",
    "FreeAbelian",
    "FreeProduct",
    "GroupExpr",
    "HNN",
    "HyperbolicGroup",
    "InfinitenessStatus",
    "Lattice",
    "Product",
    "ProperActionOn",
    "RelHyperbolic",
    "SurfaceGroup",
    "Trivial",
    "Union",
    "is_infinite",
    "normalize",
    "parse_canonical",
    "to_canonical",
    "AsphericityVerdict",
    "CompileResult",
    "ManifoldDesc",
    "ManifoldParseError",
    "OutsideClassifiedCasesError",
    "compile",
    "connected_sum_with_handles",
    "parse_manifold",
    "render",
]
