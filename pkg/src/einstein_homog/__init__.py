"""Invariant Einstein metrics on SO(n)/SO(l) and Sp(n)/Sp(l).

Exact-arithmetic computation of invariant metrics of constant Ricci ratio on
block-symmetric homogeneous spaces: scalar-curvature functionals, certified
real-root isolation of the criticality equations, closed-form families, and a
brute-force matrix Lie-algebra oracle validating every structure constant.
"""

from .algebra import (
    AlgebraError,
    DEFAULT_EPS,
    RationalPoly,
    RootInterval,
    eval_poly,
    isolate_positive_roots,
    refine_root,
    sturm_count_positive,
)
from .curvature import (
    DEFAULT_TOLERANCE,
    EinsteinCertificate,
    GeneralFamilyCoeffs,
    MetricParams,
    ScalarField,
    full_system_residual,
    gradient,
    scalar_curvature_closed,
    scalar_curvature_field,
    scalar_curvature_generic,
    three_block_form,
    three_block_scale,
    verify_einstein,
)
from .oracle import (
    MatrixBasis,
    OracleError,
    brute_triple_symbols,
    build_algebra,
    compare_triple_symbols,
    killing_form,
    verify_lemma3,
)
from .solvers import (
    EinsteinSolution,
    GeneralReduction,
    SolverError,
    general_reduce,
    general_solve,
    jensen_solve,
    plan_many_metrics,
    projective_distance,
    quartic_build,
    quartic_solve,
    table_sweep,
    theorem_sign_checks,
)
from .spaces import (
    GenericityResult,
    GroupFamily,
    ModuleId,
    NonGenericError,
    SpaceError,
    SpaceSpec,
    TripleSymbolTable,
    check_generic,
    killing_ratio,
    module_dimension,
    module_ids,
    tangent_dimension,
    triple_symbols,
)
from .surd import QuadraticSurd, decimal_str, quadratic_roots, sqrt_rational

__version__ = "0.1.0"
