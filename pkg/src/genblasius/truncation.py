"""Choice of a finite horizon ``T`` replacing the infinite interval.

Beyond ``T`` the true trajectory is controlled by the lower line
``x_a(t) >= max(0, lam t - m)`` built at ``a_min``.  Plugging it into the
integral representations of ``x''``, ``x'`` and ``x`` gives three tail
quantities.  A horizon is certified for tolerance ``eps`` when all three,
multiplied by ``a_max``, stay below ``eps``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.integrate import quad

from .estimates import BoundsSet, Bracket, constants
from .exceptions import DomainError, HorizonOverflow, NoDecay
from .model import Problem

__all__ = ["TruncationCert", "inner_integral", "tail_moment", "check_T", "find_T"]

T_CAP = 10**6
_QUAD_RTOL = 1e-13  # scipy refuses anything below 50 * machine eps
_MAX_WINDOWS = 100_000


@dataclass(frozen=True)
class TruncationCert:
    T: float
    eps: float
    lhs2: float
    lhs1: float
    lhs0: float

    @property
    def valid(self) -> bool:
        return max(self.lhs2, self.lhs1, self.lhs0) < self.eps


def _crossing(line):
    lam, m = line
    if not lam > 0 or m < 0:
        raise NoDecay(f"lower line needs slope > 0 and intercept >= 0, got {line!r}")
    return m / lam


def inner_integral(s: float, line: tuple[float, float], prob: Problem) -> float:
    """``int_0^s max(0, lam*tau - m)^p dtau`` in closed form."""
    lam, m = line
    t0 = _crossing(line)
    if s <= t0:
        return 0.0
    q = prob.p + 1
    return (lam * s - m) ** q / (lam * q)


def _remainder(n, S, T, rate):
    # int_S^inf (s-T)^n e^{-rate (s-S)} ds
    if rate <= 0:
        return math.inf
    if n == 0:
        return 1 / rate
    return (S - T) / rate + 1 / rate**2


def tail_moment(
    n: int,
    T: float,
    line: tuple[float, float],
    prob: Problem,
    abs_tol: float = 0.0,
    rel_tol: float = 1e-14,
) -> float:
    """``int_T^inf (s - T)^n exp(-c I(s)) ds`` for ``n`` in ``{0, 1}``.

    ``I`` is :func:`inner_integral`.  The range is covered by consecutive
    windows, each integrated adaptively, until the analytic bound on what
    is left drops below ``max(abs_tol, rel_tol * partial_sum)``.  The bound
    uses that the integrand's log-derivative ``-c (lam s - m)^p`` is
    nonincreasing, so past ``S`` it decays at least like
    ``exp(-c (lam S - m)^p (s - S))``.

    Raises
    ------
    DomainError
        If ``n`` is not 0 or 1, or ``T`` lies before the line's zero crossing.
    NoDecay
        If the remainder bound never meets the budget.
    """
    if n not in (0, 1):
        raise DomainError(f"moment order must be 0 or 1, got {n!r}")
    lam, m = line
    t0 = _crossing(line)
    if T < t0:
        raise DomainError(f"T={T!r} precedes the line crossing t0={t0!r}")
    p, c = prob.p, prob.c
    q = p + 1
    scale = math.exp(-c * inner_integral(T, line, prob))
    if scale == 0.0:
        return 0.0
    abs_budget = abs_tol / scale
    uT = lam * T - m
    IT = uT**q / (lam * q)

    def integrand(s):
        u = lam * s - m
        return (s - T) ** n * math.exp(-c * (u**q / (lam * q) - IT))

    base_window = max(1.0, 4.0 / (c * lam**p))
    total = 0.0
    S = T
    uS = uT
    for _ in range(_MAX_WINDOWS):
        # Cap each window where the exponent has grown by 4 more units, so
        # quad always sees a resolved bump.
        u_next = (uS**q + 4.0 * lam * q / c) ** (1 / q)
        window = min(base_window, (u_next - uS) / lam)
        piece, _err = quad(integrand, S, S + window, epsabs=0.0, epsrel=_QUAD_RTOL, limit=200)
        total += piece
        S += window
        uS = lam * S - m
        rate = c * uS**p
        bound = math.exp(-c * (uS**q / (lam * q) - IT)) * _remainder(n, S, T, rate)
        if bound <= max(abs_budget, rel_tol * total):
            return scale * total
    raise NoDecay(f"tail beyond T={T!r} did not decay within {_MAX_WINDOWS} windows")


def _shifted_tails(T, t0, line, prob, abs_tol):
    """Zeroth and first tail moments at ``T``, also for ``T < t0``.

    Before the crossing the integrand is identically 1, so that part is
    integrated exactly and the rest reuses :func:`tail_moment` at ``t0``.
    """
    if T >= t0:
        return (
            tail_moment(0, T, line, prob, abs_tol=abs_tol, rel_tol=1e-10),
            tail_moment(1, T, line, prob, abs_tol=abs_tol, rel_tol=1e-10),
        )
    d = t0 - T
    j0 = tail_moment(0, t0, line, prob, abs_tol=abs_tol, rel_tol=1e-10)
    j1 = tail_moment(1, t0, line, prob, abs_tol=abs_tol, rel_tol=1e-10)
    return d + j0, d * d / 2 + j1 + d * j0


def check_T(
    T: float,
    eps: float,
    bracket: Bracket,
    prob: Problem,
    bounds: Optional[BoundsSet] = None,
) -> TruncationCert:
    """Evaluate the three tail inequalities at horizon ``T``.

    The lower line is built at ``bracket.a_min`` and the prefactor is
    ``bracket.a_max``.
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    if not T > 0:
        raise DomainError(f"T must be positive, got {T!r}")
    if bounds is None:
        bounds = constants(prob)
    line = bounds.line(bracket.a_min)
    t0 = _crossing(line)
    a_max = bracket.a_max
    lhs2 = a_max * math.exp(-prob.c * inner_integral(T, line, prob))
    j0, j1 = _shifted_tails(T, t0, line, prob, abs_tol=1e-3 * eps / a_max)
    return TruncationCert(float(T), eps, lhs2, a_max * j0, a_max * j1)


def find_T(
    eps: float,
    bracket: Bracket,
    prob: Problem,
    bounds: Optional[BoundsSet] = None,
) -> TruncationCert:
    """Smallest integer horizon ``T >= ceil(t0) + 1`` with a valid certificate.

    Doubles ``T`` until the certificate holds, then bisects over the
    integers.  Returns the certificate of the chosen ``T``.

    Raises
    ------
    HorizonOverflow
        If no ``T <= 10**6`` is certified.
    """
    if bounds is None:
        bounds = constants(prob)
    t0 = _crossing(bounds.line(bracket.a_min))
    lo = math.ceil(t0) + 1
    cert = check_T(lo, eps, bracket, prob, bounds)
    if cert.valid:
        return cert
    bad = lo
    hi = lo
    while True:
        hi *= 2
        if hi > T_CAP:
            top = check_T(T_CAP, eps, bracket, prob, bounds)
            if not top.valid:
                raise HorizonOverflow(f"no certified horizon up to T={T_CAP} for eps={eps!r}")
            hi, good = T_CAP, top
            break
        cert = check_T(hi, eps, bracket, prob, bounds)
        if cert.valid:
            good = cert
            break
        bad = hi
    while hi - bad > 1:
        mid = (bad + hi) // 2
        cert = check_T(mid, eps, bracket, prob, bounds)
        if cert.valid:
            hi, good = mid, cert
        else:
            bad = mid
    return good
