"""Brute-force ground truth on piecewise-constant radial BV functions.

A :class:`RadialStepFunction` takes the value ``values[i]`` on the annulus
``radii[i+1] < |x| < radii[i]`` (with ``radii[k] = 0``) and vanishes outside
``radii[0]``.  All of its norms are exact closed forms: volumes of annuli for
the Lebesgue norms and ``omega_{N-1} r^{N-1} |jump|`` per sphere for the total
variation.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .constants import ProblemParams, gn_best_constant, sobolev_conjugate, unit_sphere_area
from .reduction import reduced

MAX_SHELLS = 64
SAMPLE_MAX_SHELLS = 8
RADIUS_RANGE = (1e-3, 1e3)
VALUE_RANGE = (1e-3, 1e3)
CHUNK = 10_000
VIOLATION_RTOL = 1e-9
GN_RTOL = 1e-12
GENERATOR_NAME = "numpy.random.Philox"


@dataclass(frozen=True)
class RadialStepFunction:
    radii: tuple
    values: tuple
    N: int

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        values = tuple(float(v) for v in self.values)
        if not radii or len(radii) != len(values):
            raise ValueError("need at least one shell and one value per shell")
        if len(radii) > MAX_SHELLS:
            raise ValueError(f"at most {MAX_SHELLS} shells are supported, got {len(radii)}")
        if any(not math.isfinite(r) or r <= 0 for r in radii):
            raise ValueError("radii must be finite and positive")
        if any(r1 <= r2 for r1, r2 in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly decreasing")
        if any(not math.isfinite(v) for v in values):
            raise ValueError("shell values must be finite")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"dimension N must be an integer >= 2, got {self.N!r}")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "N", int(self.N))

    @classmethod
    def ball(cls, radius: float, height: float, N: int) -> "RadialStepFunction":
        return cls((radius,), (height,), N)

    def scaled(self, factor: float) -> "RadialStepFunction":
        return RadialStepFunction(self.radii, tuple(factor * v for v in self.values), self.N)

    def __call__(self, r):
        """Pointwise value at radius ``r`` (interior of shells)."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for R, v in zip(self.radii, self.values):
            out = np.where(r < R, v, out)
        return out

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)


@dataclass(frozen=True)
class BVNorms:
    l1: float
    lq_q: float
    tv: float
    l1star_1star: float
    q: float

    def gn_ratio(self, N: int) -> float:
        """``||u||_q^q / (||u||_1^{q-(q-1)N} ||u||_TV^{(q-1)N})``."""
        q = self.q
        return self.lq_q / (self.l1 ** (q - (q - 1) * N) * self.tv ** ((q - 1) * N))


def norms(u: RadialStepFunction, q: float = None) -> BVNorms:
    """Exact ``||u||_1``, ``||u||_q^q``, ``||u||_TV`` and ``||u||_{1*}^{1*}``.

    ``q`` defaults to ``1*``.
    """
    N = u.N
    conj = sobolev_conjugate(N)
    q = conj if q is None else q
    omega = unit_sphere_area(N)
    radii = np.asarray(u.radii + (0.0,))
    vals = np.abs(np.asarray(u.values))
    vol = omega / N * (radii[:-1] ** N - radii[1:] ** N)
    jumps = np.abs(np.diff(np.concatenate(([0.0], np.asarray(u.values)))))
    tv = float(np.sum(omega * radii[:-1] ** (N - 1) * jumps))
    return BVNorms(l1=float(np.sum(vals * vol)), lq_q=float(np.sum(vals**q * vol)), tv=tv,
                   l1star_1star=float(np.sum(vals**conj * vol)), q=q)


def functional_value(u: RadialStepFunction, alpha: float, q: float) -> float:
    """``||u||_1 + alpha ||u||_q^q``."""
    nm = norms(u, q)
    return nm.l1 + alpha * nm.lq_q


def _constraint_scale(tv, l1, a: float, b: float, iters: int = 200):
    """Vectorized ``m > 0`` with ``(m tv)^a + (m l1)^b = 1`` by bisection in ``log m``."""
    tv = np.asarray(tv, dtype=float)
    l1 = np.asarray(l1, dtype=float)
    log_tv, log_l1 = np.log(tv), np.log(l1)
    # at hi one term equals 1, at lo both are <= 1/2
    hi = np.minimum(-log_tv, -log_l1)
    lo = hi - math.log(2.0) / min(a, b)

    def excess(x):
        return np.exp(a * (x + log_tv)) + np.exp(b * (x + log_l1)) - 1.0

    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        pos = excess(mid) > 0.0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    x = np.where(np.abs(excess(lo)) <= np.abs(excess(hi)), lo, hi)
    return np.exp(x)


def normalize_to_constraint(u: RadialStepFunction, a: float, b: float) -> RadialStepFunction:
    """Rescale the amplitude so that ``||u||_TV^a + ||u||_1^b = 1``."""
    if u.is_zero:
        raise ValueError("cannot normalize the zero function")
    nm = norms(u)
    m = float(_constraint_scale(nm.tv, nm.l1, a, b))
    return u.scaled(m)


def vanishing_element(u: RadialStepFunction, n: float) -> RadialStepFunction:
    """``u_n(x) = n^{-N} u(x/n)``: keeps ``||u||_1``, divides ``||u||_TV`` by ``n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    N = u.N
    return RadialStepFunction(tuple(r * n for r in u.radii),
                              tuple(v * float(n) ** (-N) for v in u.values), N)


def concentrating_element(u: RadialStepFunction, n: float) -> RadialStepFunction:
    """``u_n(x) = n^{N-1} u(n x)``: keeps ``||u||_TV`` and ``||u||_{1*}``, divides ``||u||_1`` by ``n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    N = u.N
    return RadialStepFunction(tuple(r / n for r in u.radii),
                              tuple(v * float(n) ** (N - 1) for v in u.values), N)


# Monte Carlo ---------------------------------------------------------------

def batch_norms(radii: np.ndarray, values: np.ndarray, N: int, q: float):
    """Norms of many step functions at once.

    ``radii`` is ``(S, K)`` sorted decreasingly per row; unused shells are
    padded with radius 0 and value 0, which contribute nothing.
    Returns ``(l1, lq_q, tv)``.
    """
    omega = unit_sphere_area(N)
    S = radii.shape[0]
    r_ext = np.concatenate([radii, np.zeros((S, 1))], axis=1)
    vol = omega / N * (r_ext[:, :-1] ** N - r_ext[:, 1:] ** N)
    absv = np.abs(values)
    jumps = np.abs(np.diff(np.concatenate([np.zeros((S, 1)), values], axis=1), axis=1))
    tv = np.sum(omega * radii ** (N - 1) * jumps, axis=1)
    return np.sum(absv * vol, axis=1), np.sum(absv**q * vol, axis=1), tv


def sample_step_functions(rng: np.random.Generator, count: int,
                          max_shells: int = SAMPLE_MAX_SHELLS):
    """Random radial step functions as padded ``(radii, values)`` arrays."""
    k = rng.integers(1, max_shells + 1, size=count)
    lr = np.log(RADIUS_RANGE)
    lv = np.log(VALUE_RANGE)
    radii = np.exp(rng.uniform(lr[0], lr[1], size=(count, max_shells)))
    radii = -np.sort(-radii, axis=1)
    mags = np.exp(rng.uniform(lv[0], lv[1], size=(count, max_shells)))
    signs = np.where(rng.random(size=(count, max_shells)) < 0.5, -1.0, 1.0)
    active = np.arange(max_shells)[None, :] < k[:, None]
    # keep the k largest radii; duplicates have probability zero
    radii = np.where(active, radii, 0.0)
    values = np.where(active, mags * signs, 0.0)
    return radii, values


@dataclass
class ChunkResult:
    samples: int
    max_value: float
    violations: int
    gn_violations: int
    reduction_violations: int


def _evaluate(radii, values, P: ProblemParams, d_value: float) -> tuple:
    l1, lq, tv = batch_norms(radii, values, P.N, P.q)
    m = _constraint_scale(tv, l1, P.a, P.b)
    l1m, lqm, tvm = m * l1, m**P.q * lq, m * tv
    value = l1m + P.alpha * lqm
    Eq = gn_best_constant(P.N, P.q)
    q, N = P.q, P.N
    gn = lqm / (l1m ** (q - (q - 1) * N) * tvm ** ((q - 1) * N))
    # clipped so extreme ratios still evaluate; f is flat at both ends anyway
    t = np.exp(np.clip(P.a * np.log(tvm) - P.b * np.log(l1m), -690.0, 690.0))
    f_at_t = reduced(P).eval_f(t)
    return (value,
            int(np.sum(value > d_value * (1.0 + VIOLATION_RTOL))),
            int(np.sum(gn > Eq * (1.0 + GN_RTOL))),
            int(np.sum(value > f_at_t * (1.0 + 1e-10))))


def _run_chunk(P: ProblemParams, seed: int, index: int, count: int, d_value: float):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))
    radii, values = sample_step_functions(rng, count)
    value, viol, gn_viol, red_viol = _evaluate(radii, values, P, d_value)
    return ChunkResult(count, float(np.max(value)), viol, gn_viol, red_viol)


def monte_carlo_bound_check(params: ProblemParams, samples: int, seed: int,
                            d_value: Optional[float] = None,
                            seed_radii: Sequence[float] = (),
                            workers: int = 1) -> dict:
    """Sample random constrained step functions and compare against ``D_alpha``.

    Chunk ``i`` of ``CHUNK`` samples draws from a Philox stream keyed by
    ``(seed, i)``, so the report does not depend on ``workers``.
    ``seed_radii`` adds single-ball samples (plus a small jittered cloud
    around each) to probe near known maximizers.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if d_value is None:
        from .thresholds import d_alpha
        d_value = d_alpha(params).value
    sizes = [min(CHUNK, samples - i) for i in range(0, samples, CHUNK)]
    jobs = [(params, seed, i, n, d_value) for i, n in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(lambda j: _run_chunk(*j), jobs))
    else:
        chunks = [_run_chunk(*j) for j in jobs]

    best_single = None
    violations = sum(c.violations for c in chunks)
    gn_violations = sum(c.gn_violations for c in chunks)
    red_violations = sum(c.reduction_violations for c in chunks)
    max_value = max(c.max_value for c in chunks)
    if len(seed_radii):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, len(jobs)])))
        base = np.asarray(seed_radii, dtype=float)
        jitter = base[:, None] * np.exp(rng.uniform(-1e-3, 1e-3, size=(base.size, 16)))
        r = np.concatenate([base, jitter.ravel()])[:, None]
        value, viol, gn_viol, red_viol = _evaluate(r, np.ones_like(r), params, d_value)
        violations += viol
        gn_violations += gn_viol
        red_violations += red_viol
        best_single = float(np.max(value))
        max_value = max(max_value, best_single)

    P = params
    return {
        "params": {"N": P.N, "a": P.a, "b": P.b, "q": P.q, "alpha": P.alpha},
        "samples": samples,
        "seed": seed,
        "generator": GENERATOR_NAME,
        "max_value": max_value,
        "d_alpha": d_value,
        "violations": violations,
        "gap": d_value - max_value,
        "gn_violations": gn_violations,
        "reduction_violations": red_violations,
        "seeded_samples": 0 if best_single is None else int(17 * len(seed_radii)),
        "best_seeded_value": best_single,
    }
