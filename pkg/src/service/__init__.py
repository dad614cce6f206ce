from .distortion import (
    classify,
    concave_envelope,
    convex_envelope,
    derivative_measure,
    dual,
    evaluate,
    parse_distortion,
    to_spec,
)
from .drm_bounds import (
    bound,
    bracket_unimodal,
    bracket_us,
    delta_l,
    delta_r,
    inf_general,
    inf_symmetric,
    inf_unimodal,
    inf_us,
    sup_general,
    sup_symmetric,
    sup_unimodal,
    sup_us,
    theta,
    tvar_sup_unimodal,
    tvar_sup_us,
    upsilon,
)
from .oracle import DEFAULT_SUITE, moriguti_check, run_suite, search
from .quantile_model import rho, tail_bound, validate_shape
from .var_bounds import extremal_var_distribution, var_bound

__all__ = [
    "classify",
    "concave_envelope",
    "convex_envelope",
    "derivative_measure",
    "dual",
    "evaluate",
    "parse_distortion",
    "to_spec",
    "bound",
    "bracket_unimodal",
    "bracket_us",
    "delta_l",
    "delta_r",
    "inf_general",
    "inf_symmetric",
    "inf_unimodal",
    "inf_us",
    "sup_general",
    "sup_symmetric",
    "sup_unimodal",
    "sup_us",
    "theta",
    "tvar_sup_unimodal",
    "tvar_sup_us",
    "upsilon",
    "DEFAULT_SUITE",
    "moriguti_check",
    "run_suite",
    "search",
    "rho",
    "tail_bound",
    "validate_shape",
    "extremal_var_distribution",
    "var_bound",
]
