"""Bisection shooting on the initial curvature ``a = x''(0)``."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .estimates import BoundsSet, Bracket, bracket, constants
from .exceptions import BracketFailure, DomainError
from .integrator import IntegratorConfig, integrate
from .model import Problem, State, Trajectory
from .truncation import TruncationCert, check_T, find_T

__all__ = [
    "Shot",
    "Solution",
    "CertificateReport",
    "shoot",
    "solve",
    "extend",
    "profile",
    "residual_certificate",
]

logger = logging.getLogger(__name__)


class Shot(NamedTuple):
    x_T: float
    dx_T: float
    d2x_T: float
    steps: int


@dataclass(frozen=True)
class Solution:
    """Result of :func:`solve`.

    ``h_est`` and ``mu_est`` are the finite-horizon estimates of the
    limiting slope ``lim x'(t)`` and of the asymptote offset
    ``lim (h t - x(t))``.  ``widths`` records the bisection bracket width
    after every iteration (the first entry is the analytic bracket).
    """

    problem: Problem
    a_star: float
    T: float
    eps: float
    h_est: float
    mu_est: float
    x_T: float
    d2x_T: float
    trajectory: Trajectory
    iterations: int
    cert: Optional[TruncationCert]
    bracket: Optional[Bracket]
    bounds: Optional[BoundsSet]
    widths: tuple = ()

    @property
    def steps(self) -> int:
        return self.trajectory.steps

    @property
    def proven_regime(self) -> bool:
        return self.problem.proven_regime


@dataclass(frozen=True)
class CertificateReport:
    identity_residual: float
    sandwich_violation: float
    d2x_T: float

    def ok(self, identity_tol: float = 1e-8, sandwich_tol: float = 0.0) -> bool:
        return self.identity_residual < identity_tol and self.sandwich_violation <= sandwich_tol


def _default_config(eps, T):
    return IntegratorConfig(tolerance=eps, h_max=T / 10)


def shoot(a: float, T: float, prob: Problem, cfg: Optional[IntegratorConfig] = None) -> Shot:
    """Integrate the IVP with curvature ``a`` up to ``T`` and return the endpoint."""
    if cfg is None:
        cfg = IntegratorConfig(h_max=T / 10)
    tr = integrate(a, prob, T, cfg)
    s = tr.final
    return Shot(s.x, s.dx, s.d2x, tr.steps)


def _trivial(prob, eps):
    state = State(0.0, 0.0, 0.0, 0.0)
    tr = Trajectory((state,), 0, eps, 0.0)
    return Solution(prob, 0.0, 0.0, eps, 0.0, 0.0, 0.0, 0.0, tr, 0, None, None, None)


def solve(
    prob: Problem,
    eps: float,
    horizon: Optional[float] = None,
    cfg: Optional[IntegratorConfig] = None,
) -> Solution:
    """Solve the boundary value problem by bisection shooting.

    The horizon is the smallest certified integer from :func:`find_T`
    unless ``horizon`` is given, in which case its certificate is still
    evaluated and attached (it may be invalid).  The integrator tolerance
    defaults to ``eps``.

    Raises
    ------
    BracketFailure
        If the shots at ``a_min`` and ``a_max`` do not straddle ``beta``.
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    if prob.beta == 0:
        return _trivial(prob, eps)

    bounds = constants(prob)
    br = bracket(prob, bounds)
    if horizon is None:
        cert = find_T(eps, br, prob, bounds)
    else:
        cert = check_T(horizon, eps, br, prob, bounds)
        if not cert.valid:
            logger.warning("horizon T=%g is not certified for eps=%g", horizon, eps)
    T = cert.T
    if cfg is None:
        cfg = _default_config(eps, T)
    beta = prob.beta

    def miss(a):
        tr = integrate(a, prob, T, cfg)
        return tr.final.dx - beta, tr

    lo, hi = br.a_min, br.a_max
    f_lo, tr_lo = miss(lo)
    f_hi, tr_hi = miss(hi)
    widths = [hi - lo]
    iterations = 0
    if abs(f_lo) < eps:
        a, tr = lo, tr_lo
    elif abs(f_hi) < eps:
        a, tr = hi, tr_hi
    elif not f_lo < 0 < f_hi:
        raise BracketFailure(
            f"shots do not straddle beta={beta!r}: x'(T)-beta = {f_lo!r} at a_min={lo!r}, "
            f"{f_hi!r} at a_max={hi!r}"
        )
    else:
        while True:
            a = (lo + hi) / 2
            f, tr = miss(a)
            iterations += 1
            if f < 0:
                lo = a
            else:
                hi = a
            widths.append(hi - lo)
            if abs(f) < eps or hi - lo < 4 * math.ulp(a):
                break
    logger.debug("solved a=%r after %d bisections, T=%g", a, iterations, T)

    s = tr.final
    return Solution(
        problem=prob,
        a_star=a,
        T=T,
        eps=eps,
        h_est=s.dx,
        mu_est=s.dx * T - s.x,
        x_T=s.x,
        d2x_T=s.d2x,
        trajectory=tr,
        iterations=iterations,
        cert=cert,
        bracket=br,
        bounds=bounds,
        widths=tuple(widths),
    )


def extend(sol: Solution, t):
    """Continue the solution past ``T`` with the line ``beta t + (x_T - beta T)``.

    Accepts a scalar or an array; every ``t`` must satisfy ``t >= T``.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < sol.T):
        raise DomainError(f"extension is only defined for t >= T = {sol.T!r}")
    beta = sol.problem.beta
    out = beta * arr + (sol.x_T - beta * sol.T)
    return float(out) if out.ndim == 0 else out


def profile(sol: Solution, t, cfg: Optional[IntegratorConfig] = None) -> np.ndarray:
    """Solution values ``(x, x', x'')`` at the times ``t`` as an ``(n, 3)`` array.

    Times up to ``T`` come from re-integrating the solved IVP with steps
    clamped onto each requested time; later times use :func:`extend`
    with ``x' = beta`` and ``x'' = 0``.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if ts.ndim != 1:
        raise DomainError("profile times must be a 1-d sequence")
    if np.any(ts < 0) or not np.all(np.isfinite(ts)):
        raise DomainError("profile times must be finite and non-negative")
    out = np.zeros((len(ts), 3))
    if sol.a_star == 0.0:
        return out
    inside = ts <= sol.T
    if np.any(inside):
        if cfg is None:
            cfg = _default_config(sol.eps, sol.T)
        tr = integrate(sol.a_star, sol.problem, sol.T, cfg, stops=ts[inside])
        lookup = {st.t: st for st in tr.samples}
        out[inside] = [lookup[v][1:] for v in ts[inside]]
    outside = ~inside
    if np.any(outside):
        out[outside, 0] = extend(sol, ts[outside])
        out[outside, 1] = sol.problem.beta
    return out


def cumulative_power_integral(tr: Trajectory, p: float) -> np.ndarray:
    """``int_0^t x(s)^p ds`` at every trajectory sample.

    Each step uses the two-point quintic Hermite rule built from the stored
    ``x, x', x''``, so no interpolation between steps is needed.  A step
    starting at ``x = 0`` (where ``x^(p-1)`` may be singular) uses
    ``h x(h)^p / (2p + 1)``, exact for ``x = a t^2 / 2``.
    """
    t, x, dx, d2x = tr.as_arrays()
    if len(t) < 2:
        return np.zeros_like(t)
    x = np.maximum(x, 0.0)
    h = np.diff(t)
    f = x**p
    with np.errstate(divide="ignore", invalid="ignore"):
        f1 = p * x ** (p - 1) * dx
        f2 = p * (p - 1) * x ** (p - 2) * dx**2 + p * x ** (p - 1) * d2x
    if p == 0:
        f1 = np.zeros_like(x)
        f2 = np.zeros_like(x)
    seg = (
        h / 2 * (f[:-1] + f[1:])
        + h**2 / 10 * (f1[:-1] - f1[1:])
        + h**3 / 120 * (f2[:-1] + f2[1:])
    )
    start = x[:-1] == 0
    seg[start] = h[start] * f[1:][start] / (2 * p + 1)
    return np.concatenate(([0.0], np.cumsum(seg)))


def integral_identity_residual(tr: Trajectory, prob: Problem) -> float:
    """``max |x''(t) - a exp(-c int_0^t x^p)|`` over the trajectory samples."""
    if not tr.samples:
        return 0.0
    _, _, _, d2x = tr.as_arrays()
    q = cumulative_power_integral(tr, prob.p)
    return float(np.max(np.abs(d2x - tr.a * np.exp(-prob.c * q))))


def residual_certificate(sol: Solution, tol: float = 1e-7) -> CertificateReport:
    """Post-hoc checks of a solved trajectory.

    * the integral identity for ``x''`` (see :func:`integral_identity_residual`);
    * the asymptote sandwich ``max(0, h t - mu (1+tol)) <= x <= h t (1+tol)``
      with the finite-horizon estimates ``h_est`` and ``mu_est``;
    * the curvature left at the horizon.
    """
    tr = sol.trajectory
    t, x, _, _ = tr.as_arrays()
    residual = integral_identity_residual(tr, sol.problem)
    lower = np.maximum(0.0, sol.h_est * t - sol.mu_est * (1 + tol))
    upper = sol.h_est * t * (1 + tol)
    violation = float(max(0.0, np.max(lower - x), np.max(x - upper)))
    return CertificateReport(residual, violation, sol.d2x_T)
