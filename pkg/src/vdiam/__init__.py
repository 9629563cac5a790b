"""Transfinite diameter estimation on affine varieties in Noether position."""

from .bases import (
    CmConstructionError,
    CmGenerators,
    GradedBasis,
    QuadratureError,
    QuadratureSpec,
    bb_basis,
    bb_structured,
    bb_y_block,
    cm_basis,
    cm_generators,
    default_quadrature_n,
    gram,
    inner_product,
    monomial_graded_basis,
    torus_quadrature,
    verify_cm_products,
)
from .families import (
    BasisFamily,
    ComplianceVerdict,
    CoreResult,
    Coset,
    UnsupportedFamilyShape,
    check_compliant,
    family_difference,
    family_for,
    find_core,
    parse_family,
)
from .polyring import (
    GREVLEX,
    Monomial,
    PolyParseError,
    Polynomial,
    cmp_grevlex,
    grevlex_key,
    normal_form,
    parse_polynomial,
    s_poly_check,
    star,
    top_homogeneous,
)
from .scalars import Exact, ExactSqrtError, exact_sqrt
from .variety import (
    CountRecord,
    InfinityReport,
    NoetherReport,
    VarietyPresentation,
    asymptotic_ratios,
    count,
    count_table,
    decompose_A,
    distinct_infinity_check,
    load_variety,
    monomial_basis,
    sandwich_check,
    validate_noether,
)
from .vdm import (
    BbNormalizationReport,
    CompactSetSampler,
    CompareReport,
    DiameterEstimate,
    FeketeError,
    FeketeResult,
    ScaleBoundReport,
    VdmEvaluation,
    bb_normalization,
    brute_force_max,
    compare_bases,
    diameter_sequence,
    fekete_maximize,
    file_sampler,
    log_abs_vdm,
    points_sampler,
    random_variety_points,
    row_scale_bound,
    segment_sampler,
    torus_sampler,
    vdm_matrix,
)

__version__ = "0.1.0"
