"""Best constants, thresholds and explicit maximizers for BV maximizing problems."""
from .constants import (ProblemParams, critical_b0, gn_best_constant, mazya_constant,
                        sobolev_conjugate, unit_sphere_area)
from .reduction import ReducedFunctions, endpoint_limits, eval_f, eval_g, eval_h, reduced
from .scalar_opt import ScalarOptResult, global_inf, global_sup
from .thresholds import ExtendedThreshold, alpha_c, alpha_v, asymptotic_report, d_alpha
from .classifier import BallMaximizer, RegimeReport, classify, maximizer_set, mu_of_t, r_of_t
from .oracle import (BVNorms, RadialStepFunction, concentrating_element, functional_value,
                     monte_carlo_bound_check, normalize_to_constraint, norms, vanishing_element)

__all__ = [
    "ProblemParams", "critical_b0", "gn_best_constant", "mazya_constant", "sobolev_conjugate",
    "unit_sphere_area", "ReducedFunctions", "endpoint_limits", "eval_f", "eval_g", "eval_h",
    "reduced", "ScalarOptResult", "global_inf", "global_sup", "ExtendedThreshold", "alpha_c",
    "alpha_v", "asymptotic_report", "d_alpha", "BallMaximizer", "RegimeReport", "classify",
    "maximizer_set", "mu_of_t", "r_of_t", "BVNorms", "RadialStepFunction",
    "concentrating_element", "functional_value", "monte_carlo_bound_check",
    "normalize_to_constraint", "norms", "vanishing_element",
]
__version__ = "0.1.0"
