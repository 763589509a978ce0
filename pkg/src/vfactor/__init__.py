"""Exact toolkit for triangular rational maps, the quadratic-form models
behind them, and factoring experiments that exploit failed division in
Z/cZ.

Everything numeric is exact (Fraction) unless a module says otherwise;
the analysis module works in mpmath where the cost model is inherently
real-valued.
"""

from .errors import (
    ArityError,
    BudgetExceeded,
    CorrespondenceViolation,
    DegenerateNodes,
    EmptyModel,
    FamilyGap,
    IndependenceViolation,
    NoInteriorOptimum,
    NondegeneracyExhausted,
    ZeroDenominator,
    ZeroPivot,
)
from .builder import (
    ClosedFormN4,
    QuadraticModel,
    StructureConstants,
    build_example_n4,
    build_from_params,
    build_half_family,
    build_third_family,
    check_nondegeneracy,
    solve_structure_constants,
)
from .variety import (
    PointSet,
    TriangularMap,
    enumerate_quadratic_zeros,
    eval_triangular,
    verify_gaussian_form,
    verify_membership,
)
from .factor import (
    FactorConfig,
    FactorReport,
    FamilyMember,
    MapFamily,
    NFTriangularMap,
    factor_number_field,
    factor_semiprime,
    gaussian_integer_fixture,
    pollard_baseline,
    sample_tau,
    search_np,
)
from .analysis import (
    ComplexityInputs,
    CountReport,
    ScalingScenario,
    bound_check,
    count_plane_curve,
    count_points_bruteforce,
    litmus_classify,
    optimal_log_np,
    success_probability,
    total_complexity,
    trials_estimate,
)
from .models import (
    IsolatedPointSet,
    ModelSpec,
    ReducedModel,
    cnf_to_3sat,
    diagonal_model,
    enumerate_isolated_points,
    model_a,
    model_from_cnf,
    parse_dimacs,
    reduce_model,
    sat_correspondence,
    to_dimacs,
    verify_independence_property,
)

__version__ = "0.1.0"
