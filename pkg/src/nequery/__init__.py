"""Exact quantum query algorithms for the iterated not-all-equal function."""

from .constructions import (
    CONSTRUCTION_1,
    CONSTRUCTION_1_ZERO,
    CONSTRUCTION_2,
    CONSTRUCTION_2_ZERO,
)
from .pcalc import amplify_p, exponent, iterate_p, lift_mixing, lift_p, plan_p, plan_p_float
from .plan import (
    Amplify,
    Base,
    CosPiOver,
    Iterate,
    Lift,
    PlanError,
    PlanSyntaxError,
    depth,
    dimension,
    eval_ne,
    eval_ne_d,
    eval_ne_d_many,
    parse_plan,
    plan_stats,
    queries,
    render_plan,
)
from .planner import SearchConfig, search, trace, trace_csv
from .simulator import (
    apply,
    apply_many,
    exact_decide,
    exact_decide_many,
    overlap,
    overlap_many,
    start_state,
    to_dense_matrix,
)
from .verifier import (
    exhaustive_inputs,
    sensitivity_check,
    structured_inputs,
    verify_exact,
    verify_p_computation,
)

__version__ = "0.1.0"
