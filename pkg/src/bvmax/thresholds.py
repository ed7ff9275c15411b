"""Vanishing/concentration thresholds and the supremum value.

``alpha_v = inf g / E_q``, ``alpha_c = sup h / E`` (critical case only) and
``D_alpha = sup f``.  Wherever a closed form is known it is returned by
default; ``numeric=True`` forces the optimizer path, which is how the two
are cross-checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .constants import ProblemParams, b0_switch_exponent, compare, critical_b0
from .reduction import reduced
from .scalar_opt import (
    GRID_LO,
    ScalarOptResult,
    bracket_root,
    find_sign_change,
    global_inf,
    global_sup,
    log_critical_t0_concentration,
    log_critical_t0_vanishing,
)

INF = math.inf
# largest |log t| handed to exp() when chasing warm starts
_LOG_T_MAX = 700.0


@dataclass
class ExtendedThreshold:
    """A threshold value in ``[0, inf]`` with its provenance.

    ``source`` is ``"closed-form"`` or ``"numeric"``; ``formula_id`` names the
    theorem clause of a closed form.  Numeric values carry the extremizing
    ``arg`` when the extremum is interior and ``log_value`` for
    cancellation-free comparisons against a limit.
    """

    value: float
    source: str
    formula_id: Optional[str] = None
    arg: Optional[float] = None
    log_value: Optional[float] = None
    opt: Optional[ScalarOptResult] = field(default=None, repr=False)

    def __post_init__(self):
        if math.isnan(self.value) or self.value < 0.0:
            raise ValueError(f"threshold must lie in [0, inf], got {self.value!r}")
        if self.log_value is None and self.value > 0 and math.isfinite(self.value):
            self.log_value = math.log(self.value)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    def to_dict(self) -> dict:
        return {"value": self.value, "source": self.source, "formula_id": self.formula_id}


def _closed(value: float, formula_id: str) -> ExtendedThreshold:
    return ExtendedThreshold(value=value, source="closed-form", formula_id=formula_id)


# alpha_v ---------------------------------------------------------------------

def _alpha_v_closed_form(P: ProblemParams) -> Optional[ExtendedThreshold]:
    rf = reduced(P)
    if P.is_critical:
        E = rf.Eq
        side_a = compare(P.a, P.conjugate)
        side_b = compare(P.b, 1.0)
        if side_a > 0:
            return _closed(0.0, "Thm4(i)")
        if side_a == 0 and side_b > 0:
            return _closed(1.0 / (P.b * E), "Thm4(ii)")
        if side_b <= 0:
            return _closed(1.0 / E, "Thm4(ii)")
        return None
    side_a = compare(P.a, P.vanishing_exponent)
    if side_a > 0:
        return _closed(0.0, "Thm2(i)")
    if side_a == 0:
        q_low = compare(P.q, b0_switch_exponent(P.N)) <= 0
        if q_low or compare(P.b, critical_b0(P.N, P.q)) >= 0:
            return _closed(1.0 / (P.b * rf.Eq), "Thm2(ii)")
    return None


def _alpha_v_warm_start(P: ProblemParams):
    """Extra search brackets / points for the interior minimum of g."""
    rf = reduced(P)
    brackets, points = [], []
    if not P.is_critical and compare(P.a, P.vanishing_exponent) == 0:
        # b < b0: g < 1/b exactly on (0, t2) where phi(t2) = 0; the minimum lives there
        phi = lambda t: rf.eval_phi_family(t)[0]
        br = find_sign_change(phi, -30.0, _LOG_T_MAX)
        if br is not None:
            t2 = bracket_root(phi, *br)
            brackets.append((GRID_LO, math.log(t2)))
    elif P.is_critical and compare(P.a, P.conjugate) < 0 and compare(P.b, 1.0) > 0:
        # g-tilde < 0 on (0, t1), > 0 beyond, with t1 > t0
        log_t0 = log_critical_t0_vanishing(P)
        if log_t0 < _LOG_T_MAX - 1.0:
            br = find_sign_change(rf.eval_gtilde, max(log_t0, -_LOG_T_MAX), _LOG_T_MAX, step=1.0)
            if br is not None:
                points.append(bracket_root(rf.eval_gtilde, *br))
    return brackets, points


def _alpha_v_numeric(P: ProblemParams) -> ExtendedThreshold:
    rf = reduced(P)
    brackets, points = _alpha_v_warm_start(P)
    res = global_inf(rf.log_g, rf.endpoint_limits("g"), log_scale=True,
                     extra_brackets=brackets, extra_points=points)
    log_value = res.log_value - math.log(rf.Eq)
    value = math.exp(log_value) if log_value < 709.0 else INF
    arg = res.arg if res.attained or res.tie else None
    return ExtendedThreshold(value=value, source="numeric", arg=arg,
                             log_value=log_value if value > 0 else None, opt=res)


def alpha_v(params: ProblemParams, numeric: bool = False) -> ExtendedThreshold:
    """Vanishing threshold ``alpha_v = inf_{t>0} g(t) / E_q``."""
    if not numeric:
        closed = _alpha_v_closed_form(params)
        if closed is not None:
            return closed
    return _alpha_v_numeric(params)


# alpha_c ---------------------------------------------------------------------

def _alpha_c_closed_form(P: ProblemParams) -> Optional[ExtendedThreshold]:
    E = reduced(P).Eq
    side_a = compare(P.a, P.conjugate)
    side_b = compare(P.b, 1.0)
    if side_b > 0:
        return _closed(INF, "Thm4(i)" if side_a > 0 else "Thm4(ii)")
    if side_a > 0 and side_b == 0:
        return _closed(P.a / (P.conjugate * E), "Thm4(i)")
    if side_a <= 0:
        return _closed(1.0 / E, "Thm4(ii)")
    return None


def _alpha_c_warm_start(P: ProblemParams):
    rf = reduced(P)
    points = []
    if compare(P.a, P.conjugate) > 0 and compare(P.b, 1.0) < 0:
        # h-tilde > 0 on (0, t1), < 0 beyond, with t1 < t0
        log_t0 = log_critical_t0_concentration(P)
        if -_LOG_T_MAX < log_t0 < _LOG_T_MAX:
            s_lo, step = log_t0 - 1.0, 1.0
            while s_lo > -_LOG_T_MAX and rf.eval_htilde(math.exp(s_lo)) <= 0.0:
                s_lo = max(s_lo - step, -_LOG_T_MAX)
                step *= 2.0
            if rf.eval_htilde(math.exp(s_lo)) > 0.0:
                points.append(bracket_root(rf.eval_htilde, math.exp(s_lo), math.exp(log_t0)))
    return points


def _alpha_c_numeric(P: ProblemParams) -> ExtendedThreshold:
    rf = reduced(P)
    res = global_sup(rf.log_h, rf.endpoint_limits("h"), log_scale=True,
                     extra_points=_alpha_c_warm_start(P))
    if math.isinf(res.value):
        return ExtendedThreshold(value=INF, source="numeric", opt=res)
    log_value = res.log_value - math.log(rf.Eq)
    arg = res.arg if res.attained or res.tie else None
    return ExtendedThreshold(value=math.exp(log_value), source="numeric", arg=arg,
                             log_value=log_value, opt=res)


def alpha_c(params: ProblemParams, numeric: bool = False) -> ExtendedThreshold:
    """Concentration threshold ``alpha_c = sup_{t>0} h(t) / E`` (requires ``q = 1*``)."""
    if not params.is_critical:
        raise ValueError("alpha_c is only defined in the critical case q = 1*")
    if not numeric:
        closed = _alpha_c_closed_form(params)
        if closed is not None:
            return closed
    return _alpha_c_numeric(params)


# D_alpha -------------------------------------------------------------------

def d_alpha(params: ProblemParams) -> ScalarOptResult:
    """``D_alpha = sup_{t>0} f_alpha(t)``; ``candidates`` holds the interior maximizers found."""
    rf = reduced(params)
    return global_sup(rf.log_f, rf.endpoint_limits("f"), log_scale=True)


# asymptotics -----------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceRow:
    parameter: float
    threshold: float
    error: float


@dataclass
class ConvergenceTable:
    which: str
    threshold_name: str
    target: float
    clause: str
    rows: list

    @property
    def errors(self) -> list:
        return [r.error for r in self.rows]

    @property
    def thresholds(self) -> list:
        return [r.threshold for r in self.rows]


LIMIT_TAGS = ("a_down_0", "a_up_Nq1", "b_down_0", "b_up_b0", "b_down_1", "b_up_1",
              "b_to_inf", "a_down_1star", "a_to_inf")


def _limit_plan(P: ProblemParams, which: str):
    """Return (parameter name, sequence builder, threshold name, target, clause)."""
    E = reduced(P).Eq
    Nq1 = P.vanishing_exponent
    crit = P.is_critical
    conj = P.conjugate

    def reject(reason):
        raise ValueError(f"limit {which!r} is not covered for these parameters: {reason}")

    if which == "a_down_0":
        seq = lambda k: Nq1 * 10.0 ** (-k)
        if not crit:
            return "a", seq, "alpha_v", INF, "Thm2(iii)(a)"
        if compare(P.b, 1.0) > 0:
            return "a", seq, "alpha_v", 1.0 / E, "Thm4(iii)(a)"
        reject("critical case needs b > 1")
    if which == "a_up_Nq1":
        seq = lambda k: Nq1 * (1.0 - 10.0 ** (-k))
        if not crit:
            if compare(P.q, b0_switch_exponent(P.N)) <= 0 or compare(P.b, critical_b0(P.N, P.q)) >= 0:
                return "a", seq, "alpha_v", 1.0 / (P.b * E), "Thm2(iii)(b)"
            reject("needs q <= (2N-1)/(2(N-1)) or b >= b0")
        if compare(P.b, 1.0) > 0:
            return "a", seq, "alpha_v", 1.0 / (P.b * E), "Thm4(iii)(a)"
        reject("critical case needs b > 1")
    if which == "b_down_0":
        seq = lambda k: 10.0 ** (-k)
        if not crit:
            if compare(P.a, Nq1) <= 0:
                return "b", seq, "alpha_v", INF, "Thm2(iii)(c)"
            reject("needs a <= N(q-1)")
        if compare(P.a, conj) > 0:
            return "b", seq, "alpha_c", 1.0 / E, "Thm4(iii)(c)"
        reject("critical case needs a > 1*")
    if which == "b_up_b0":
        if crit or compare(P.a, Nq1) != 0 or compare(P.q, b0_switch_exponent(P.N)) <= 0:
            reject("needs subcritical q > (2N-1)/(2(N-1)) and a = N(q-1)")
        b0 = critical_b0(P.N, P.q)
        return "b", lambda k: b0 * (1.0 - 10.0 ** (-k)), "alpha_v", 1.0 / (b0 * E), "Thm2(iii)(d)"
    if which == "b_down_1":
        if crit and compare(P.a, conj) <= 0:
            return "b", lambda k: 1.0 + 10.0 ** (-k), "alpha_v", 1.0 / E, "Thm4(iii)(d)"
        reject("needs q = 1* and a <= 1*")
    if which == "b_up_1":
        if crit and compare(P.a, conj) > 0:
            return "b", lambda k: 1.0 - 10.0 ** (-k), "alpha_c", P.a / (conj * E), "Thm4(iii)(c)"
        reject("needs q = 1* and a > 1*")
    if which == "b_to_inf":
        seq = lambda k: 10.0 ** k
        if not crit and compare(P.a, Nq1) <= 0:
            return "b", seq, "alpha_v", 0.0, "Thm2(iii)(c)"
        if crit and compare(P.a, conj) <= 0:
            return "b", seq, "alpha_v", 0.0, "Thm4(iii)(d)"
        reject("needs a <= N(q-1)")
    if which == "a_down_1star":
        if crit and compare(P.b, 1.0) <= 0:
            return "a", lambda k: conj * (1.0 + 10.0 ** (-k)), "alpha_c", 1.0 / E, "Thm4(iii)(b)"
        reject("needs q = 1* and b <= 1")
    if which == "a_to_inf":
        if crit and compare(P.b, 1.0) <= 0:
            return "a", lambda k: conj * 10.0 ** k, "alpha_c", INF, "Thm4(iii)(b)"
        reject("needs q = 1* and b <= 1")
    raise ValueError(f"unknown limit tag {which!r}; expected one of {', '.join(LIMIT_TAGS)}")


def _error(th: ExtendedThreshold, target: float) -> float:
    if math.isinf(target):
        return INF
    if target == 0.0:
        return th.value
    if th.is_infinite:
        return INF
    if th.log_value is not None:
        return target * abs(math.expm1(th.log_value - math.log(target)))
    return abs(th.value - target)


def asymptotic_report(params: ProblemParams, which: str,
                      ks: Iterable[int] = range(2, 7),
                      values: Optional[Sequence[float]] = None) -> ConvergenceTable:
    """Evaluate a threshold along a geometric sequence approaching a parameter limit.

    ``ks`` index the default sequence (e.g. ``a = N(q-1)(1 - 10^-k)``);
    ``values`` overrides it with explicit parameter values.
    """
    name, seq, th_name, target, clause = _limit_plan(params, which)
    if values is None:
        values = [seq(k) for k in ks]
    fn = alpha_v if th_name == "alpha_v" else alpha_c
    rows = []
    for x in values:
        th = fn(params.with_(**{name: x}), numeric=True)
        rows.append(ConvergenceRow(parameter=x, threshold=th.value, error=_error(th, target)))
    return ConvergenceTable(which=which, threshold_name=th_name, target=target,
                            clause=clause, rows=rows)
