"""Exact self-affine iterated function systems on curves and surfaces.

The package builds explicit affine systems whose attractors live on the
moment curve (t, t², …, tⁿ) and on the paraboloid x₁²+⋯+x_{n−1}² = x_n,
verifies the defining identities exactly over the rationals, samples
attractors numerically, classifies curve germs up to affine conjugacy
against the moment curve, and walks the polynomial-pullback obstruction
that keeps non-trivial self-affine sets off compact algebraic surfaces.
"""

from .affine import (
    AffineMap,
    ContractionCertificate,
    IteratedFunctionSystem,
    compose,
    fixed_point,
    identity_map,
    ifs_from_jsonable,
    ifs_to_jsonable,
    invert,
    is_contractive,
    iterate,
    map_from_jsonable,
    map_to_jsonable,
    matrix_from_jsonable,
    max_row_sum,
    operator_norm,
)
from .attractor import chaos_game, diameter, hutchinson_iterate, one_sided_hausdorff
from .classifier import (
    DEFAULT_ORDER,
    VERDICT_CONJUGATION,
    VERDICT_GAP,
    VERDICT_HYPERPLANE,
    VERDICT_MOMENT,
    ClassificationResult,
    ConjugationReport,
    GraphForm,
    HyperplaneDegeneracyError,
    InsufficientOrderError,
    RecenterResult,
    check_conjugation,
    classify_curve,
    germ_from_jsonable,
    germ_to_jsonable,
    graph_form,
    normalize_at_fixed_point,
    solve_recenter,
    tangent_eigenvalue,
)
from .cloud import PointCloud, read_csv, write_csv, write_svg
from .exactlinalg import (
    determinant,
    express_in_span,
    greedy_independent,
    mat_inverse,
    solve,
)
from .moment import (
    InvarianceReport,
    MomentCurveSpec,
    MomentIfsRecipe,
    build_moment_ifs,
    choose_anchors,
    eval_moment,
    lambda_bound,
    moment_homothety,
    recipe_from_jsonable,
    recipe_to_jsonable,
    verify_moment_invariance,
)
from .paraboloid import (
    ParaboloidSpec,
    build_paraboloid_ifs,
    eval_paraboloid_embedding,
    paraboloid_polynomial,
    surface_residual,
    verify_paraboloid_conjugation,
)
from .polynomials import (
    FixedPointReport,
    MultiPoly,
    ScalingCertificate,
    format_polynomial,
    is_self_affine_pair,
    parse_polynomial,
    scaling_certificate,
    scaling_constant,
    verify_fixed_points_on_surface,
)
from .pullback import (
    CITED_CONCLUSION,
    DecayReport,
    PullbackSequence,
    circle_polynomial,
    coefficient_span_dimension,
    dependency_witness,
    diameter_decay_report,
    pullback_sequence,
    rational_circle_points,
)
from .rationals import Rational, format_rational, parse_rational, sqrt_upper_bound
from .series import (
    TruncatedSeries,
    series_compose,
    series_multiply,
    series_reverse,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "CITED_CONCLUSION",
    "ClassificationResult",
    "ConjugationReport",
    "ContractionCertificate",
    "DEFAULT_ORDER",
    "DecayReport",
    "FixedPointReport",
    "GraphForm",
    "HyperplaneDegeneracyError",
    "InsufficientOrderError",
    "InvarianceReport",
    "IteratedFunctionSystem",
    "MomentCurveSpec",
    "MomentIfsRecipe",
    "MultiPoly",
    "ParaboloidSpec",
    "PointCloud",
    "PullbackSequence",
    "Rational",
    "RecenterResult",
    "ScalingCertificate",
    "TruncatedSeries",
    "VERDICT_CONJUGATION",
    "VERDICT_GAP",
    "VERDICT_HYPERPLANE",
    "VERDICT_MOMENT",
    "build_moment_ifs",
    "build_paraboloid_ifs",
    "chaos_game",
    "check_conjugation",
    "choose_anchors",
    "circle_polynomial",
    "classify_curve",
    "coefficient_span_dimension",
    "compose",
    "dependency_witness",
    "determinant",
    "diameter",
    "diameter_decay_report",
    "eval_moment",
    "eval_paraboloid_embedding",
    "express_in_span",
    "fixed_point",
    "format_polynomial",
    "format_rational",
    "germ_from_jsonable",
    "germ_to_jsonable",
    "graph_form",
    "greedy_independent",
    "hutchinson_iterate",
    "identity_map",
    "ifs_from_jsonable",
    "ifs_to_jsonable",
    "invert",
    "is_contractive",
    "is_self_affine_pair",
    "iterate",
    "lambda_bound",
    "map_from_jsonable",
    "map_to_jsonable",
    "mat_inverse",
    "matrix_from_jsonable",
    "max_row_sum",
    "moment_homothety",
    "normalize_at_fixed_point",
    "one_sided_hausdorff",
    "operator_norm",
    "paraboloid_polynomial",
    "parse_polynomial",
    "parse_rational",
    "pullback_sequence",
    "rational_circle_points",
    "read_csv",
    "recipe_from_jsonable",
    "recipe_to_jsonable",
    "scaling_certificate",
    "scaling_constant",
    "series_compose",
    "series_multiply",
    "series_reverse",
    "solve",
    "solve_recenter",
    "sqrt_upper_bound",
    "surface_residual",
    "tangent_eigenvalue",
    "verify_fixed_points_on_surface",
    "verify_moment_invariance",
    "verify_paraboloid_conjugation",
    "write_csv",
    "write_svg",
]
