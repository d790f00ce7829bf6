"""normlab: norm derivatives and orthogonality in complex normed spaces."""

from .analysis import (
    BOUNDS,
    CONJECTURE_ONE,
    DUAL_CONSTANT,
    UNIVERSAL_4_OVER_PI,
    AuditReport,
    EquivalenceReport,
    MapAnalysis,
    MapWitness,
    SymmetryReport,
    cs_bound_audit,
    map_preservation_analysis,
    norm_equivalence_constant,
    operator_norm_estimate,
    symmetry_defect,
)
from .derivatives import (
    CLOSED_FORM,
    NUMERIC_LIMIT,
    QUADRATURE,
    SMOOTH_FAST_PATH,
    FunctionalValue,
    rho_lambda,
    rho_lambda_upsilon,
    rho_milicic,
    rho_minus,
    rho_plus,
)
from .errors import (
    DimensionMismatchError,
    NormLabError,
    NotSmoothError,
    NTooSmallError,
    RUnknownError,
    SpecParseError,
    ZeroBaseError,
    ZeroMapError,
)
from .orthogonality import (
    BIRKHOFF_JAMES,
    RELATIONS,
    RHO_INF,
    RHO_PLUS,
    SEMI,
    OrthoVerdict,
    SamplerConfig,
    Witness,
    birkhoff_minimize,
    decomposition_alpha,
    perp,
    perp_birkhoff_james,
    perp_rho_inf,
    perp_rho_plus,
    perp_semi,
    relation_compare,
    semi_inner,
)
from .rho_infinity import (
    QuadratureTrace,
    quadrature_rho_inf,
    rho_inf,
    rho_inf_traced,
    rho_n,
    root_sum_identity,
    roots_of_unity,
)
from .spaces import (
    DualInfo,
    NormSpec,
    dual_segment_constant,
    format_complex,
    format_cvector,
    format_norm_spec,
    gram_inner,
    is_smooth_family,
    lp,
    norm,
    parse_complex,
    parse_cvector,
    parse_norm_spec,
    pd_inner,
    polyhedral,
    vector,
    weighted_l1,
)

__version__ = "0.1.0"
