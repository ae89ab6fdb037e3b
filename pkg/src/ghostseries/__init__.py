"""Exact Newton polygons and slopes of abstract ghost series."""

from .analysis import (
    ap_parameters,
    ap_verify,
    compare_slopes,
    distinct_slope_report,
    distribution_report,
    gouvea_check,
    normalized_slopes,
    semistable_check,
)
from .dimensions import (
    DimensionModel,
    QuasiLinearSpec,
    RhobarSpec,
    build_gamma0_model,
    build_quasilinear_model,
    build_rhobar_model,
    growth_constants,
    verify_axioms,
)
from .ghost import coefficient, delta_data, delta_slope, delta_star, eval_valuation, exact_eval_oracle
from .newton import NewtonPolygon, SlopeSequence, ghost_slopes, lower_hull, wadic_slopes
from .weightspace import (
    INF,
    BoundaryWeight,
    GhostParams,
    IntegerWeight,
    NearIntegerWeight,
    weight_diff_valuation,
)

__version__ = "0.1.0"
