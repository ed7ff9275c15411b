"""Geometric constants and the closed-form best constants.

Everything downstream is built from the unit-sphere area ``omega_{N-1}``,
the Sobolev conjugate ``1* = N/(N-1)`` and the Gagliardo-Nirenberg constant
``E_q = (N^{N-1} omega_{N-1})^{-(q-1)}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

# relative tolerance used to snap parameters onto structural boundaries
# (q = 1*, a = N(q-1), b = 1, ...)
STRUCTURAL_RTOL = 1e-12


def close(x: float, y: float, rtol: float = STRUCTURAL_RTOL) -> bool:
    """True when ``x`` and ``y`` agree to ``rtol`` relative to ``max(|x|, |y|, 1)``."""
    return abs(x - y) <= rtol * max(abs(x), abs(y), 1.0)


def compare(x: float, y: float, rtol: float = STRUCTURAL_RTOL) -> int:
    """Three-way comparison of ``x`` against ``y`` with a relative tie band."""
    if close(x, y, rtol):
        return 0
    return 1 if x > y else -1


def _check_dimension(N: int) -> None:
    if int(N) != N or N < 2:
        raise ValueError(f"dimension N must be an integer >= 2, got {N!r}")


def sobolev_conjugate(N: int) -> float:
    """Return ``1* = N / (N - 1)``."""
    _check_dimension(N)
    return N / (N - 1)


def _half_gamma(N: int) -> float:
    # Gamma(N/2) for integer N >= 1 through the half-integer recurrence
    if N % 2 == 0:
        return float(math.factorial(N // 2 - 1))
    k = (N - 1) // 2
    # Gamma(k + 1/2) = (2k-1)!! / 2^k * sqrt(pi)
    double_fact = 1
    for j in range(2 * k - 1, 0, -2):
        double_fact *= j
    return double_fact / 2.0**k * math.sqrt(math.pi)


def unit_sphere_area(N: int) -> float:
    """Surface area ``omega_{N-1} = 2 pi^{N/2} / Gamma(N/2)`` of the unit sphere in R^N.

    The unit ball volume is ``omega_{N-1} / N``.
    """
    _check_dimension(N)
    return 2.0 * math.pi ** (N / 2) / _half_gamma(N)


def _check_q(N: int, q: float, *, allow_critical: bool = True) -> float:
    conj = sobolev_conjugate(N)
    if not math.isfinite(q) or q <= 1.0:
        raise ValueError(f"q must satisfy 1 < q <= 1* = {conj:g}, got {q!r}")
    if close(q, conj):
        if not allow_critical:
            raise ValueError(f"q must satisfy 1 < q < 1* = {conj:g} (subcritical), got {q!r}")
        return conj
    if q > conj:
        raise ValueError(f"q must satisfy 1 < q <= 1* = {conj:g}, got {q!r}")
    return q


def gn_best_constant(N: int, q: float) -> float:
    """Gagliardo-Nirenberg best constant ``E_q``.

    At ``q = 1*`` this is the Mazya constant ``E`` of the embedding BV -> L^{1*}.
    """
    q = _check_q(N, q)
    return (1.0 / (N ** (N - 1) * unit_sphere_area(N))) ** (q - 1.0)


def mazya_constant(N: int) -> float:
    """``E = (N^{N-1} omega_{N-1})^{-1/(N-1)}``, evaluated independently of ``gn_best_constant``."""
    _check_dimension(N)
    return (1.0 / (N ** (N - 1) * unit_sphere_area(N))) ** (1.0 / (N - 1))


def critical_b0(N: int, q: float) -> float:
    """Constraint-exponent boundary ``b_0 = (q-1)(N-1) - (N - (N-1)q)``.

    Positive exactly when ``q > (2N-1)/(2(N-1))``.
    """
    _check_dimension(N)
    return (q - 1.0) * (N - 1) - (N - (N - 1) * q)


def b0_switch_exponent(N: int) -> float:
    """``(2N-1)/(2(N-1))``, the value of ``q`` where ``b_0`` changes sign."""
    _check_dimension(N)
    return (2 * N - 1) / (2 * (N - 1))


@dataclass(frozen=True)
class ProblemParams:
    """One instance ``(N, a, b, q, alpha)`` of the maximizing problem.

    ``q`` within ``1e-12`` (relative) of ``1*`` is snapped to ``1*`` exactly so
    that the critical code paths see an exact value.
    """

    N: int
    a: float
    b: float
    q: float
    alpha: float = 1.0

    def __post_init__(self):
        _check_dimension(self.N)
        object.__setattr__(self, "N", int(self.N))
        for name in ("a", "b", "alpha"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be a finite positive real, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "q", _check_q(self.N, float(self.q)))

    @property
    def conjugate(self) -> float:
        return sobolev_conjugate(self.N)

    @property
    def is_critical(self) -> bool:
        return self.q == self.conjugate

    @property
    def vanishing_exponent(self) -> float:
        """``N(q-1)``: the value of ``a`` separating alpha_v = 0 from alpha_v > 0."""
        return self.N * (self.q - 1.0)

    def with_(self, **changes) -> "ProblemParams":
        fields = dict(N=self.N, a=self.a, b=self.b, q=self.q, alpha=self.alpha)
        fields.update(changes)
        return ProblemParams(**fields)
