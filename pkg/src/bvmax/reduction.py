"""One-dimensional reduced functions of the maximizing problem.

With ``t = ||u||_TV^a / ||u||_1^b`` the whole problem collapses onto functions
of ``t > 0``.  Writing ``L = log(1+t)``, ``p = (q-1)N/a`` and
``c = (N - q(N-1))/b`` they can be rearranged as

    f(t) = (1+t)^{-1/b} + alpha E_q (1 + 1/t)^{-p} (1+t)^{-c}
    g(t) = (1 + 1/t)^{p} (1+t)^{c} (1 - (1+t)^{-1/b})
    h(t) = (1+t)^{-1/b} / (1 - (t/(1+t))^{1*/a})          (q = 1* only)

which only ever combine ``log1p``/``expm1`` of well-scaled arguments, so they
stay accurate from ``t ~ 1e-300`` to ``t ~ 1e300``.  The factorizations

    f - 1       = (1+1/t)^{-p} (1+t)^{-c} (alpha E_q - g)
    f - alpha E = (1 - (t/(1+t))^{1*/a}) (h - alpha E)    (q = 1*)

are what tie the thresholds to the supremum.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import ProblemParams, compare, critical_b0, gn_best_constant

INF = math.inf


def log1mexp(x):
    """``log(1 - exp(x))`` for ``x <= 0``, accurate over the whole range."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(
            x > -math.log(2.0),
            np.log(-np.expm1(np.minimum(x, -0.0))),
            np.log1p(-np.exp(np.minimum(x, -math.log(2.0)))),
        )
    return out


def _as_t(t):
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("t must be finite and strictly positive")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


@dataclass(frozen=True)
class EndpointLimits:
    """Limits of a reduced function as ``t -> 0+`` and ``t -> infinity``."""

    at_zero: float
    at_infinity: float

    def __post_init__(self):
        for v in (self.at_zero, self.at_infinity):
            if math.isnan(v) or v < 0.0:
                raise ValueError(f"endpoint limits must be >= 0 or +inf, got {v!r}")


@dataclass(frozen=True)
class ReducedFunctions:
    """Reduced functions of one problem instance with cached exponents.

    Every ``eval_*`` / ``log_*`` method accepts a scalar or a numpy array.
    """

    params: ProblemParams
    p: float = field(init=False)  # (q-1)N/a
    c1: float = field(init=False)  # (q-1)(N/a - (N-1)/b)
    c2: float = field(init=False)  # (N - q(N-1))/b
    s: float = field(init=False)  # 1*/a
    inv_b: float = field(init=False)
    e2: float = field(init=False)  # (q-1)(N-1)/b
    Eq: float = field(init=False)

    def __post_init__(self):
        P = self.params
        N, a, b, q = P.N, P.a, P.b, P.q
        set_ = functools.partial(object.__setattr__, self)
        set_("p", (q - 1.0) * N / a)
        set_("c1", (q - 1.0) * (N / a - (N - 1) / b))
        set_("c2", (N - q * (N - 1)) / b)
        set_("s", P.conjugate / a)
        set_("inv_b", 1.0 / b)
        set_("e2", (q - 1.0) * (N - 1) / b)
        set_("Eq", gn_best_constant(N, q))

    @property
    def alpha_E(self) -> float:
        return self.params.alpha * self.Eq

    def _require_critical(self, what: str) -> None:
        if not self.params.is_critical:
            raise ValueError(f"{what} is only defined in the critical case q = 1*")

    # f ------------------------------------------------------------------
    def log_f(self, t):
        tt = _as_t(t)
        L = np.log1p(tt)
        second = math.log(self.alpha_E) - self.p * np.log1p(1.0 / tt) - self.c2 * L
        return _out(np.logaddexp(-L * self.inv_b, second), t)

    def eval_f(self, t):
        return _out(np.exp(self.log_f(t)), t)

    # g ------------------------------------------------------------------
    def log_g(self, t):
        tt = _as_t(t)
        L = np.log1p(tt)
        out = self.p * np.log1p(1.0 / tt) + self.c2 * L + log1mexp(-L * self.inv_b)
        return _out(out, t)

    def eval_g(self, t):
        return _out(np.exp(self.log_g(t)), t)

    # h ------------------------------------------------------------------
    def log_h(self, t):
        self._require_critical("h")
        tt = _as_t(t)
        L = np.log1p(tt)
        out = -L * self.inv_b - log1mexp(-self.s * np.log1p(1.0 / tt))
        return _out(out, t)

    def eval_h(self, t):
        return _out(np.exp(self.log_h(t)), t)

    # phi family (a = N(q-1), subcritical) --------------------------------
    def eval_phi_family(self, t):
        """``(phi, phi', phi'', varphi)`` with ``phi'' = (1+t)^{-1-e2} varphi``."""
        P = self.params
        if P.is_critical:
            raise ValueError("phi family requires the subcritical case 1 < q < 1*")
        if compare(P.a, P.vanishing_exponent) != 0:
            raise ValueError("phi family requires a = N(q-1)")
        tt = _as_t(t)
        L = np.log1p(tt)
        e1, e2, ib = self.c2, self.e2, self.inv_b
        # (1+t)^{1-e2} ((1+t)^{1/b} - 1) - t/b, written to keep the O(t) parts exact;
        # exponents are merged so that huge t overflows to +-inf, never to 0*inf
        x = L * ib
        log_em1 = np.where(x > 1.0, x + np.log1p(-np.exp(-np.maximum(x, 1.0))),
                           np.log(np.expm1(np.minimum(x, 1.0))))
        with np.errstate(over="ignore"):
            phi = np.exp((1.0 - e2) * L + log_em1) - tt * ib
            dphi = (1.0 + e1) * np.expm1(e1 * L) - (1.0 - e2) * np.expm1(-e2 * L)
            varphi = e1 * (1.0 + e1) * np.exp(x) + e2 * (1.0 - e2)
            # e1 + e2 = 1/b
            d2phi = e1 * (1.0 + e1) * np.exp((e1 - 1.0) * L) + e2 * (1.0 - e2) * np.exp((-1.0 - e2) * L)
        return tuple(_out(x, t) for x in (phi, dphi, d2phi, varphi))

    def varphi_at_zero(self) -> float:
        e1, e2 = self.c2, self.e2
        return e1 * (1.0 + e1) + e2 * (1.0 - e2)

    # sign functions (q = 1*) ---------------------------------------------
    def eval_gtilde(self, t):
        """``t/b + (1*/a)(1 - (1+t)^{1/b})``; same sign as ``g'``."""
        self._require_critical("g-tilde")
        tt = _as_t(t)
        return _out(tt * self.inv_b - self.s * np.expm1(np.log1p(tt) * self.inv_b), t)

    def eval_htilde(self, t):
        """``1 + b 1*/(a t) - ((1+t)/t)^{1*/a}``; same sign as ``h'``."""
        self._require_critical("h-tilde")
        tt = _as_t(t)
        b = self.params.b
        return _out(b * self.s / tt - np.expm1(self.s * np.log1p(1.0 / tt)), t)

    # limits ---------------------------------------------------------------
    def endpoint_limits(self, which: str) -> EndpointLimits:
        P = self.params
        if which == "f":
            return EndpointLimits(1.0, self.alpha_E if P.is_critical else 0.0)
        if which == "g":
            side = compare(P.a, P.vanishing_exponent)
            at_zero = {1: 0.0, 0: self.inv_b, -1: INF}[side]
            return EndpointLimits(at_zero, 1.0 if P.is_critical else INF)
        if which == "h":
            self._require_critical("h")
            side = compare(P.b, 1.0)
            at_inf = {1: INF, 0: P.a / P.conjugate, -1: 0.0}[side]
            return EndpointLimits(1.0, at_inf)
        raise ValueError(f"unknown reduced function {which!r}; expected 'f', 'g' or 'h'")


@functools.lru_cache(maxsize=1024)
def reduced(params: ProblemParams) -> ReducedFunctions:
    return ReducedFunctions(params)


def eval_f(t, params: ProblemParams):
    return reduced(params).eval_f(t)


def eval_g(t, params: ProblemParams):
    return reduced(params).eval_g(t)


def eval_h(t, params: ProblemParams):
    return reduced(params).eval_h(t)


def eval_phi_family(t, params: ProblemParams):
    return reduced(params).eval_phi_family(t)


def eval_gtilde(t, params: ProblemParams):
    return reduced(params).eval_gtilde(t)


def eval_htilde(t, params: ProblemParams):
    return reduced(params).eval_htilde(t)


def endpoint_limits(which: str, params: ProblemParams) -> EndpointLimits:
    return reduced(params).endpoint_limits(which)


def b0_of(params: ProblemParams) -> float:
    return critical_b0(params.N, params.q)
