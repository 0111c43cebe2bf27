"""A-priori bounds for the shooting map and the slant asymptote.

For the IVP with curvature ``a`` the limits ``h(a) = lim x'(t)`` and
``mu(a) = lim (h(a) t - x(t))`` satisfy two-sided power-law bounds whose
constants depend only on ``(p, c)``.  Inverting the bounds on ``h`` gives
a bracket that must contain the curvature solving ``h(a) = beta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import DomainError
from .model import Problem

__all__ = [
    "gamma_fn",
    "BoundsSet",
    "Bracket",
    "constants",
    "h_bounds",
    "mu_bounds",
    "bracket",
    "lower_line",
]

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2 * math.pi)


def gamma_fn(z: float) -> float:
    """Euler Gamma function for real ``z > 0`` (Lanczos, g=7, 9 terms)."""
    z = float(z)
    if not math.isfinite(z) or z <= 0:
        raise DomainError(f"gamma_fn needs a finite positive argument, got {z!r}")
    if z < 1:
        # Gamma(z) = Gamma(z + 1) / z keeps the series argument >= 1.
        return gamma_fn(z + 1) / z
    z -= 1
    s = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        s += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # Split the power so large arguments neither overflow nor lose digits.
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * s


@dataclass(frozen=True)
class BoundsSet:
    """Constants ``c1 .. c5`` of the a-priori estimates for fixed ``(p, c)``.

    ``h_lo = c2 a^r``, ``h_hi = c1 a^r`` with ``r = (p+1)/(2p+1)``;
    ``mu_lo = c4 a^q``, ``mu_hi = c5 a^q`` with ``q = 1/(2p+1)``.
    ``c2`` and ``c3`` are also the slope and intercept factors of the
    lower line ``x_a(t) >= c2 a^r t - c3 a^q``.
    """

    p: float
    c: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    @property
    def h_exponent(self) -> float:
        return (self.p + 1) / (2 * self.p + 1)

    @property
    def mu_exponent(self) -> float:
        return 1 / (2 * self.p + 1)

    def line(self, a: float) -> tuple[float, float]:
        """Slope and intercept ``(lam, m)`` of the lower line for curvature ``a``."""
        return self.c2 * a**self.h_exponent, self.c3 * a**self.mu_exponent


@dataclass(frozen=True)
class Bracket:
    a_min: float
    a_max: float

    @property
    def width(self) -> float:
        return self.a_max - self.a_min

    def __contains__(self, a: float) -> bool:
        return self.a_min <= a <= self.a_max


def constants(prob: Problem) -> BoundsSet:
    """Evaluate the closed-form constants for ``prob.p`` and ``prob.c``."""
    p, c = prob.p, prob.c
    if not (p >= 0 and c > 0):
        raise DomainError(f"constants need p >= 0 and c > 0, got p={p!r}, c={c!r}")
    al = 2 * p + 1
    q = p + 1
    g1a, g2a = gamma_fn(1 / al), gamma_fn(2 / al)
    g1q, g2q = gamma_fn(1 / q), gamma_fn(2 / q)

    c2 = g1a * (2**p / (c * al ** (2 * p))) ** (1 / al)
    c3 = g2a * al ** ((1 - 2 * p) / al) * (2**p / c) ** (2 / al)
    c1 = c3 / c2 + g1q / (c ** (1 / q) * (c2 * q) ** (p / q))
    c4 = 2 ** (2 * p / al) * g2a / (al ** ((2 * p - 1) / al) * c ** (2 / al))
    c5 = (
        c3**2 / 2
        + (c2 / c) ** (2 / q) * q ** ((1 - p) / q) * g2q
        + c3 * (c2 / (c * q**p)) ** (1 / q) * g1q
    ) / c2**2
    return BoundsSet(p, c, c1, c2, c3, c4, c5)


def _check_a(a):
    if not (a > 0 and math.isfinite(a)):
        raise DomainError(f"curvature must be finite and positive, got {a!r}")


def h_bounds(a: float, bounds: BoundsSet, prob: Problem = None) -> tuple[float, float]:
    """Lower and upper bounds on the limiting slope ``h(a)``."""
    _check_a(a)
    s = a**bounds.h_exponent
    return bounds.c2 * s, bounds.c1 * s


def mu_bounds(a: float, bounds: BoundsSet, prob: Problem = None) -> tuple[float, float]:
    """Lower and upper bounds on the asymptote offset ``mu(a)``."""
    _check_a(a)
    s = a**bounds.mu_exponent
    return bounds.c4 * s, bounds.c5 * s


def bracket(prob: Problem, bounds: BoundsSet) -> Bracket:
    """Interval of curvatures guaranteed to contain the solution of ``h(a) = beta``.

    Obtained by inverting the power-law bounds on ``h`` exactly.
    """
    if not prob.beta > 0:
        raise DomainError("beta = 0 has the trivial solution; no bracket is needed")
    e = 1 / bounds.h_exponent
    return Bracket((prob.beta / bounds.c1) ** e, (prob.beta / bounds.c2) ** e)


def lower_line(a: float, bounds: BoundsSet, prob: Problem = None) -> tuple[float, float]:
    """``(lam, m)`` with ``x_a(t) >= lam * t - m`` for all ``t >= 0``."""
    _check_a(a)
    return bounds.line(a)
