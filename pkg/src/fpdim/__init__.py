"""Exact dimensions of fat-point surface systems through points on an elliptic quartic curve."""

from .chow import (
    AmbientMismatch,
    AmbientSpace,
    DivisorClass,
    TwoCycle,
    canonical_class,
    chi_curve_blowup,
    chi_identity_case1,
    chi_identity_case3,
    euler_characteristic,
    linear_system_class,
    pair,
    rr_bracket,
    second_chern,
    triple_product,
)
from .classify import (
    CaseOne,
    CaseThree,
    CaseTwo,
    Classification,
    Cone,
    Empty,
    InvariantViolation,
    Truncate,
    case_label,
    classification_to_json,
    classify,
    compute_b,
    compute_t,
    is_case_two,
)
from .dimension import (
    DimensionResult,
    dim_case_one,
    dim_case_three,
    dim_case_two,
    dimension,
)
from .oracle import (
    CHECK_PRIME,
    DEFAULT_PRIME,
    ConditionMatrix,
    CurveInstance,
    CurveSamplingError,
    OracleReport,
    OracleTrial,
    condition_matrix,
    make_curve,
    oracle_dimension,
    rank_mod_p,
)
from .reduction import (
    ReductionStep,
    ReductionTrace,
    cremona_quadruple,
    reduce_to_standard,
)
from .systems import (
    DefectVector,
    FatPointSystem,
    anticanonical_degree,
    binom,
    expected_dim,
    format_multiplicities,
    line_defects,
    parse_multiplicities,
    virtual_dim,
)
from .verify import (
    SweepConfig,
    VerificationRecord,
    enumerate_grid,
    grid_instances,
    run_sweep,
    run_verification,
)

__version__ = "0.1.0"
