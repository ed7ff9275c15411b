"""Deterministic global optimization over the half-line ``(0, inf)``.

Objectives are scanned on a fixed log-uniform grid, every promising local
extremum is polished by golden-section search in ``s = log t``, and the
result is compared against analytically supplied endpoint limits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .constants import ProblemParams, compare
from .reduction import EndpointLimits

GRID_LO = -60.0
GRID_HI = 60.0
GRID_POINTS = 1201
# refine at most this many grid extrema (best first)
MAX_REFINE = 8
ATTAIN_RTOL = 1e-11
PLATEAU_RTOL = 1e-12
PLATEAU_ARG = 1.0
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

_GRID = np.linspace(GRID_LO, GRID_HI, GRID_POINTS)


@dataclass
class ScalarOptResult:
    """Outcome of ``global_sup`` / ``global_inf``.

    ``attained`` is True for a clear interior extremum or a constant
    objective.  ``tie`` flags the numerically ambiguous case where the best
    interior value matches an endpoint limit within the attainment slack;
    those are left to the analytic classifier.
    """

    value: float
    arg: Optional[float]
    attained: bool
    limits: EndpointLimits
    candidates: list = field(default_factory=list)
    plateau: bool = False
    tie: bool = False
    log_value: Optional[float] = None

    @property
    def args(self) -> list:
        """All candidates whose value equals ``value`` within the slack."""
        if self.plateau:
            return [self.arg]
        slack = ATTAIN_RTOL * max(1.0, abs(self.value)) if math.isfinite(self.value) else 0.0
        return [t for t, v in self.candidates if abs(v - self.value) <= slack]


def golden_section(fun: Callable[[float], float], lo: float, hi: float,
                   tol: float = 1e-10, maxiter: int = 200, maximize: bool = True):
    """Golden-section search on ``[lo, hi]``; returns ``(x, fun(x))``."""
    sign = 1.0 if maximize else -1.0
    x1 = hi - INVPHI * (hi - lo)
    x2 = lo + INVPHI * (hi - lo)
    f1 = sign * fun(x1)
    f2 = sign * fun(x2)
    for _ in range(maxiter):
        if hi - lo <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INVPHI * (hi - lo)
            f1 = sign * fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INVPHI * (hi - lo)
            f2 = sign * fun(x2)
    if f1 >= f2:
        return x1, sign * f1
    return x2, sign * f2


def _log_or_inf(v: float) -> float:
    if v == 0.0:
        return -math.inf
    return math.log(v)


def _safe_exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def _is_plateau(values: np.ndarray, log_scale: bool) -> bool:
    """Spread of the natural-scale values is within ``PLATEAU_RTOL * max(1, |max|)``."""
    hi, lo = float(np.max(values)), float(np.min(values))
    if not log_scale:
        return hi - lo <= PLATEAU_RTOL * max(1.0, abs(hi), abs(lo))
    # (e^hi - e^lo) / max(1, e^hi) without leaving the log domain
    rel = -math.expm1(lo - hi)
    if hi < 0.0:
        rel *= math.exp(hi)
    return rel <= PLATEAU_RTOL


def _optimize(objective, limits: EndpointLimits, tol: float, maximize: bool,
              log_scale: bool, extra_brackets: Sequence, extra_points: Iterable):
    sign = 1.0 if maximize else -1.0

    def score(s):
        return float(objective(math.exp(s)))

    with np.errstate(over="ignore", under="ignore"):
        values = np.asarray(objective(np.exp(_GRID)), dtype=float)
    if not np.all(np.isfinite(values)):
        bad = np.exp(_GRID[~np.isfinite(values)][0])
        raise FloatingPointError(f"objective is not finite on the search grid (t = {bad:.3e})")

    if _is_plateau(values, log_scale):
        v = float(objective(PLATEAU_ARG))
        natv = _safe_exp(v) if log_scale else v
        return ScalarOptResult(value=natv, arg=PLATEAU_ARG, attained=True, limits=limits,
                               candidates=[(PLATEAU_ARG, natv)], plateau=True,
                               log_value=v if log_scale else None)

    # local extrema of sign*values on interior indices; flat runs keep their right end
    sv = sign * values
    idx = np.nonzero((sv[1:-1] >= sv[:-2]) & (sv[1:-1] > sv[2:]))[0] + 1
    idx = idx[np.argsort(-sv[idx], kind="stable")][:MAX_REFINE]

    found = []
    for i in idx:
        s, v = golden_section(score, _GRID[i - 1], _GRID[i + 1], tol=tol, maximize=maximize)
        if sign * v < sv[i]:
            s, v = _GRID[i], values[i]
        found.append((float(s), float(v)))
    for lo, hi in extra_brackets:
        s, v = golden_section(score, lo, hi, tol=tol, maximize=maximize)
        found.append((float(s), float(v)))
    for t in extra_points:
        if t > 0 and math.isfinite(t):
            found.append((math.log(t), float(objective(t))))

    candidates = sorted({(math.exp(s), v) for s, v in found}, key=lambda c: -sign * c[1])
    to_nat = _safe_exp if log_scale else (lambda x: x)
    nat_candidates = [(t, to_nat(v)) for t, v in candidates]

    lim_vals = (limits.at_zero, limits.at_infinity)
    lim_best = max(lim_vals) if maximize else min(lim_vals)
    if nat_candidates:
        best_t, best_v = nat_candidates[0]
        best_raw = candidates[0][1]
    else:
        best_t, best_v, best_raw = None, -sign * math.inf, -sign * math.inf

    gap = sign * (best_v - lim_best) if best_t is not None else -math.inf
    slack = ATTAIN_RTOL * max(1.0, abs(best_v)) if best_t is not None else 0.0
    attained = best_t is not None and gap > slack
    tie = best_t is not None and not attained and abs(gap) <= slack

    if attained or (best_t is not None and sign * (best_v - lim_best) >= 0):
        value, log_value = best_v, best_raw
    else:
        value = lim_best
        log_value = _log_or_inf(lim_best) if log_scale else None
    return ScalarOptResult(value=value, arg=best_t if (attained or tie) else None,
                           attained=attained, limits=limits, candidates=nat_candidates,
                           tie=tie, log_value=log_value if log_scale else None)


def global_sup(objective, limits: EndpointLimits, tol: float = 1e-10, *,
               log_scale: bool = False, extra_brackets: Sequence = (),
               extra_points: Iterable = ()) -> ScalarOptResult:
    """Supremum of ``objective`` over ``t > 0``.

    ``objective`` must accept numpy arrays.  With ``log_scale=True`` it
    returns the logarithm of a positive quantity; ``limits`` are always given
    on the natural scale.  ``extra_brackets`` are additional ``(lo, hi)``
    intervals in ``log t`` to search and ``extra_points`` are known critical
    points in ``t``.
    """
    return _optimize(objective, limits, tol, True, log_scale, extra_brackets, extra_points)


def global_inf(objective, limits: EndpointLimits, tol: float = 1e-10, *,
               log_scale: bool = False, extra_brackets: Sequence = (),
               extra_points: Iterable = ()) -> ScalarOptResult:
    """Infimum of ``objective`` over ``t > 0``; mirror image of ``global_sup``."""
    return _optimize(objective, limits, tol, False, log_scale, extra_brackets, extra_points)


def bracket_root(sign_function: Callable[[float], float], lo: float, hi: float,
                 tol: float = 1e-13, maxiter: int = 400) -> float:
    """Bisection in ``log t`` for a sign change of ``sign_function`` on ``[lo, hi]``."""
    if not (0 < lo < hi) or not math.isfinite(hi):
        raise ValueError(f"need 0 < lo < hi < inf, got lo={lo!r}, hi={hi!r}")
    flo, fhi = float(sign_function(lo)), float(sign_function(hi))
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise ValueError("sign_function does not change sign on [lo, hi]")
    slo, shi = math.log(lo), math.log(hi)
    for _ in range(maxiter):
        if shi - slo <= tol:
            break
        mid = 0.5 * (slo + shi)
        fm = float(sign_function(math.exp(mid)))
        if fm == 0.0:
            return math.exp(mid)
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            slo, flo = mid, fm
        else:
            shi = mid
    return math.exp(0.5 * (slo + shi))


def find_sign_change(sign_function, s_lo: float, s_hi: float, step: float = 0.5):
    """Scan ``log t`` from ``s_lo`` upward for the first sign change; returns a t-bracket or None."""
    prev_s = s_lo
    prev = float(sign_function(math.exp(prev_s)))
    s = s_lo
    while s < s_hi:
        s = min(s + step, s_hi)
        cur = float(sign_function(math.exp(s)))
        if prev == 0.0 or math.copysign(1.0, cur) != math.copysign(1.0, prev):
            return math.exp(prev_s), math.exp(s)
        prev_s, prev = s, cur
    return None


def log_critical_t0_concentration(params: ProblemParams) -> float:
    """``log t0`` with ``t0 = x/(1-x)``, ``x = b^{a/(a-1*)}``; finite even when ``t0`` underflows."""
    P = params
    if not P.is_critical or compare(P.a, P.conjugate) <= 0 or compare(P.b, 1.0) >= 0:
        raise ValueError("critical_t0_concentration needs q = 1*, a > 1*, b < 1")
    log_x = P.a / (P.a - P.conjugate) * math.log(P.b)
    return log_x - math.log(-math.expm1(log_x))


def critical_t0_concentration(params: ProblemParams) -> float:
    """Stationary point of h-tilde, ``t0 = b^{a/(a-1*)} / (1 - b^{a/(a-1*)})``."""
    return math.exp(log_critical_t0_concentration(params))


def log_critical_t0_vanishing(params: ProblemParams) -> float:
    """``log t0`` with ``t0 = (1*/a)^{b/(b-1)} - 1``."""
    P = params
    if not P.is_critical or compare(P.a, P.conjugate) >= 0 or compare(P.b, 1.0) <= 0:
        raise ValueError("critical_t0_vanishing needs q = 1*, a < 1*, b > 1")
    y = P.b / (P.b - 1.0) * math.log(P.conjugate / P.a)
    # log(e^y - 1)
    return y + math.log(-math.expm1(-y)) if y > 1.0 else math.log(math.expm1(y))


def critical_t0_vanishing(params: ProblemParams) -> float:
    """Stationary point of g-tilde, ``t0 = (1*/a)^{b/(b-1)} - 1``."""
    return math.exp(log_critical_t0_vanishing(params))
