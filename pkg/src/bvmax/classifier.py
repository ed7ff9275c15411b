"""Attainability verdicts and explicit ball maximizers.

The verdict is read off the exact case trees (subcritical ``Thm1`` and
critical ``Thm3`` clauses); the optimizer is only used to produce the
maximizing ratio ``t0`` from which the ball ``+-mu(t0) chi_{B_r(t0)}`` is
built.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import ProblemParams, b0_switch_exponent, compare, critical_b0, unit_sphere_area
from .reduction import _as_t, _out
from .scalar_opt import ScalarOptResult
from .thresholds import ExtendedThreshold, alpha_c, alpha_v, d_alpha

log = logging.getLogger(__name__)

DEFAULT_EQ_TOL = 1e-9
CONTINUUM_SAMPLES = (0.1, 1.0, 10.0)

ATTAINED = "attained"
NOT_ATTAINED = "not-attained"

BELOW_V = "alpha<alpha_v"
AT_V = "alpha=alpha_v"
BETWEEN = "alpha_v<alpha<alpha_c"
AT_C = "alpha=alpha_c"
ABOVE_C = "alpha>alpha_c"
NO_THRESHOLD = "no-threshold"


def log_r_of_t(t, params: ProblemParams):
    P = params
    tt = _as_t(t)
    out = math.log(P.N) - np.log(tt) / P.a - (P.a - P.b) / (P.a * P.b) * np.log1p(tt)
    return _out(out, t)


def log_mu_of_t(t, params: ProblemParams):
    P = params
    N, a, b = P.N, P.a, P.b
    tt = _as_t(t)
    out = (N / a * np.log(tt) + ((a - b) * N / (a * b) - 1.0 / b) * np.log1p(tt)
           - math.log(unit_sphere_area(N)) - (N - 1) * math.log(N))
    return _out(out, t)


def r_of_t(t, params: ProblemParams):
    """Radius ``r(t) = N / (t^{1/a} (1+t)^{(a-b)/(ab)})`` of the maximizing ball."""
    return _out(np.exp(log_r_of_t(t, params)), t)


def mu_of_t(t, params: ProblemParams):
    """Height ``mu(t) = t^{N/a} (1+t)^{(a-b)N/(ab) - 1/b} / (omega_{N-1} N^{N-1})``."""
    return _out(np.exp(log_mu_of_t(t, params)), t)


@dataclass(frozen=True)
class BallMaximizer:
    """``sign * height * chi_{B_radius(center)}``; every translate is also a maximizer."""

    t0: float
    radius: float
    height: float
    sign: int = 1
    center: tuple = ()
    continuum: bool = False

    def tv(self, N: int) -> float:
        return self.height * self.radius ** (N - 1) * unit_sphere_area(N)

    def l1(self, N: int) -> float:
        return self.height * self.radius**N * unit_sphere_area(N) / N

    def constraint(self, params: ProblemParams) -> float:
        return self.tv(params.N) ** params.a + self.l1(params.N) ** params.b

    def to_dict(self) -> dict:
        return {"t0": self.t0, "radius": self.radius, "height": self.height,
                "sign": self.sign, "center": list(self.center), "continuum": self.continuum}


@dataclass
class RegimeReport:
    params: ProblemParams
    alpha_v: ExtendedThreshold
    alpha_c: Optional[ExtendedThreshold]
    d_alpha: float
    verdict: str
    case_label: str
    threshold_relation: str
    degenerate: bool = False
    opt: Optional[ScalarOptResult] = field(default=None, repr=False)

    @property
    def attained(self) -> bool:
        return self.verdict == ATTAINED

    def to_dict(self) -> dict:
        P = self.params
        return {
            "params": {"N": P.N, "a": P.a, "b": P.b, "q": P.q, "alpha": P.alpha},
            "alpha_v": self.alpha_v.to_dict(),
            "alpha_c": None if self.alpha_c is None else self.alpha_c.to_dict(),
            "d_alpha": self.d_alpha,
            "verdict": self.verdict,
            "case_label": self.case_label,
            "threshold_relation": self.threshold_relation,
            "degenerate": self.degenerate,
        }


def _relation(alpha: float, th: ExtendedThreshold, eq_tol: float) -> int:
    if th.is_infinite:
        return -1
    if abs(alpha - th.value) <= eq_tol * max(abs(th.value), 1e-300):
        return 0
    return 1 if alpha > th.value else -1


def _subcritical_tree(P: ProblemParams, av: ExtendedThreshold, eq_tol: float):
    side_a = compare(P.a, P.vanishing_exponent)
    if side_a > 0:
        return ATTAINED, "Thm1(i)", NO_THRESHOLD, False
    rel = _relation(P.alpha, av, eq_tol)
    if rel > 0:
        return ATTAINED, "Thm1(ii)", BETWEEN, False
    if rel < 0:
        return NOT_ATTAINED, "Thm1(ii)", BELOW_V, False
    if side_a < 0:
        return ATTAINED, "Thm1(iii)", AT_V, True
    q_high = compare(P.q, b0_switch_exponent(P.N)) > 0
    if q_high and compare(P.b, critical_b0(P.N, P.q)) < 0:
        return ATTAINED, "Thm1(iii)", AT_V, True
    return NOT_ATTAINED, "Thm1(iv)", AT_V, True


def _critical_tree(P: ProblemParams, av: ExtendedThreshold, ac: ExtendedThreshold,
                   eq_tol: float):
    side_a = compare(P.a, P.conjugate)
    side_b = compare(P.b, 1.0)
    if side_a > 0 and side_b > 0:
        return ATTAINED, "Thm3(i)", NO_THRESHOLD, False
    if side_a > 0:
        rel = _relation(P.alpha, ac, eq_tol)
        if rel < 0:
            return ATTAINED, "Thm3(ii)", BETWEEN, False
        if rel > 0:
            return NOT_ATTAINED, "Thm3(ii)", ABOVE_C, False
        return (ATTAINED if side_b < 0 else NOT_ATTAINED), "Thm3(v)", AT_C, True
    rel = _relation(P.alpha, av, eq_tol)
    if rel != 0:
        if side_b > 0:
            verdict = ATTAINED if rel > 0 else NOT_ATTAINED
            return verdict, "Thm3(iii)", (BETWEEN if rel > 0 else BELOW_V), False
        return NOT_ATTAINED, "Thm3(iv)", (ABOVE_C if rel > 0 else BELOW_V), False
    # alpha = alpha_v (= alpha_c when b <= 1)
    if side_a == 0:
        return (ATTAINED if side_b == 0 else NOT_ATTAINED), "Thm3(vi)", AT_V, True
    return (ATTAINED if side_b > 0 else NOT_ATTAINED), "Thm3(vii)", AT_V, True


def classify(params: ProblemParams, eq_tol: float = DEFAULT_EQ_TOL) -> RegimeReport:
    """Attainability verdict for ``D_alpha`` with the theorem clause that decides it.

    ``eq_tol`` is the relative tolerance under which ``alpha`` counts as equal
    to a threshold; such reports are flagged ``degenerate``.
    """
    P = params
    av = alpha_v(P)
    ac = alpha_c(P) if P.is_critical else None
    if P.is_critical:
        verdict, label, relation, degenerate = _critical_tree(P, av, ac, eq_tol)
    else:
        verdict, label, relation, degenerate = _subcritical_tree(P, av, eq_tol)
    res = d_alpha(P)
    return RegimeReport(params=P, alpha_v=av, alpha_c=ac, d_alpha=res.value, verdict=verdict,
                        case_label=label, threshold_relation=relation,
                        degenerate=degenerate, opt=res)


def _maximizing_ratios(report: RegimeReport) -> tuple:
    """Elements of the maximizing set of ``f_alpha`` and whether it is a continuum."""
    P = report.params
    if report.opt is not None and report.opt.plateau:
        return list(CONTINUUM_SAMPLES), True
    if report.threshold_relation == AT_V:
        # f_{alpha_v}(t) = 1 exactly where g attains its infimum
        th = alpha_v(P, numeric=True)
        return ([th.arg] if th.arg is not None else []), False
    if report.threshold_relation == AT_C:
        th = alpha_c(P, numeric=True)
        return ([th.arg] if th.arg is not None else []), False
    return report.opt.args, False


def ball_from_ratio(t0: float, params: ProblemParams, sign: int = 1,
                    continuum: bool = False) -> BallMaximizer:
    return BallMaximizer(t0=float(t0), radius=r_of_t(t0, params), height=mu_of_t(t0, params),
                         sign=sign, center=(0.0,) * params.N, continuum=continuum)


def maximizer_set(params: ProblemParams, eq_tol: float = DEFAULT_EQ_TOL,
                  report: Optional[RegimeReport] = None) -> list:
    """All maximizers ``+-mu(t0) chi_{B_{r(t0)}}`` centred at the origin.

    Returns an empty list when ``D_alpha`` is not attained.  For a continuum
    of maximizing ratios a few representatives are sampled and flagged.
    """
    report = report or classify(params, eq_tol)
    if not report.attained:
        log.info("D_alpha is not attained (%s, %s); no maximizers",
                 report.case_label, report.threshold_relation)
        return []
    ratios, continuum = _maximizing_ratios(report)
    if not ratios:
        log.warning("attained regime %s but no interior maximizing ratio was located",
                    report.case_label)
    balls = []
    for t0 in ratios:
        for sign in (1, -1):
            balls.append(ball_from_ratio(t0, params, sign=sign, continuum=continuum))
    return balls
