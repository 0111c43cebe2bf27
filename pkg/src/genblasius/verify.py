"""Numerical checks of the a-priori estimates on computed trajectories.

Each check yields a :class:`Check`.  Failures for ``p >= 1`` are hard
(the estimates are theorems there); for ``p < 1`` they are reported as
warnings only.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np
from scipy.integrate import simpson

from .estimates import BoundsSet, Bracket, constants
from .integrator import IntegratorConfig, integrate
from .model import Problem, Trajectory
from .shooting import integral_identity_residual
from .truncation import find_T, inner_integral, tail_moment

__all__ = [
    "Check",
    "Measurement",
    "measure",
    "simpson_tail",
    "run_suite",
    "DEFAULT_PS",
    "DEFAULT_CS",
    "DEFAULT_AS",
]

DEFAULT_PS = (1.0, 2.0, 3.0, 7.0)
DEFAULT_CS = (0.5, 1.0)
DEFAULT_AS = (0.05, 0.2, 1.0, 5.0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    hard: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))

    @property
    def status(self) -> str:
        if self.passed:
            return "PASS"
        return "FAIL" if self.hard else "WARN"


@dataclass(frozen=True)
class Measurement:
    """Finite-horizon estimates of ``h(a)`` and ``mu(a)`` for one curvature."""

    problem: Problem
    a: float
    T: float
    h: float
    mu: float
    trajectory: Trajectory


def measure(a: float, prob: Problem, eps: float = 1e-12) -> Measurement:
    """Integrate to a horizon certified for the single curvature ``a``."""
    bounds = constants(prob)
    T = find_T(eps, Bracket(a, a), prob, bounds).T
    tr = integrate(a, prob, T, IntegratorConfig(tolerance=eps, h_max=T / 10))
    s = tr.final
    return Measurement(prob, a, T, s.dx, s.dx * T - s.x, tr)


def simpson_tail(n, T, line, prob, length=200.0, intervals=10**6):
    """Brute-force composite Simpson value of the tail moment on ``[T, T+length]``."""
    lam, m = line
    q = prob.p + 1
    s = np.linspace(T, T + length, intervals + 1)
    shift = inner_integral(T, line, prob)
    u = np.maximum(lam * s - m, 0.0)
    f = (s - T) ** n * np.exp(-prob.c * (u**q / (lam * q) - shift))
    return math.exp(-prob.c * shift) * simpson(f, x=s)


def _trajectory_checks(meas: Measurement, bounds: BoundsSet, hard: bool) -> Iterator[Check]:
    prob, a = meas.problem, meas.a
    tag = f"p={prob.p:g} c={prob.c:g} a={a:g}"
    slack = 10 * meas.trajectory.tolerance
    t, x, dx, d2x = meas.trajectory.as_arrays()
    t, x, dx, d2x = t[1:], x[1:], dx[1:], d2x[1:]

    worst = max(
        np.max(-x), np.max(x - a * t**2 / 2),
        np.max(-dx), np.max(dx - a * t),
        np.max(-d2x), np.max(d2x - a),
    )
    yield Check(f"a-priori sandwich [{tag}]", worst <= slack, hard, f"worst excess {worst:.3e}")

    lam, m = bounds.line(a)
    gap = float(np.max(lam * t - m - x))
    yield Check(f"lower line [{tag}]", gap <= slack, hard, f"worst excess {gap:.3e}")

    mono = max(np.max(np.diff(-x)), np.max(np.diff(-dx)), np.max(np.diff(d2x)))
    yield Check(f"monotone trajectory [{tag}]", mono <= slack, hard, f"worst reversal {mono:.3e}")

    res = integral_identity_residual(meas.trajectory, prob)
    yield Check(f"curvature identity [{tag}]", res < 1e-8 * a, hard, f"residual {res:.3e}")

    h_lo, h_hi = bounds.c2 * a**bounds.h_exponent, bounds.c1 * a**bounds.h_exponent
    ok = h_lo - 1e-8 <= meas.h <= h_hi + 1e-8
    yield Check(f"h bounds [{tag}]", ok, hard, f"{h_lo:.6g} <= {meas.h:.10g} <= {h_hi:.6g}")

    mu_lo, mu_hi = bounds.c4 * a**bounds.mu_exponent, bounds.c5 * a**bounds.mu_exponent
    ok = mu_lo - 1e-8 <= meas.mu <= mu_hi + 1e-8
    yield Check(f"mu bounds [{tag}]", ok, hard, f"{mu_lo:.6g} <= {meas.mu:.10g} <= {mu_hi:.6g}")

    tol = 1e-7
    lower = np.maximum(0.0, meas.h * t - meas.mu * (1 + tol))
    upper = meas.h * t * (1 + tol)
    viol = float(max(0.0, np.max(lower - x), np.max(x - upper)))
    yield Check(f"asymptote sandwich [{tag}]", viol <= tol, hard, f"violation {viol:.3e}")

    if prob.p == 0:
        h_ex, mu_ex = a / prob.c, a / prob.c**2
        ok = abs(meas.h - h_ex) < 1e-8 and abs(meas.mu - mu_ex) < 1e-8
        yield Check(
            f"linear closed form [{tag}]", ok, True,
            f"h={meas.h:.12g} (exact {h_ex:.12g}), mu={meas.mu:.12g} (exact {mu_ex:.12g})",
        )


def _scaling_checks(meas_by_a: dict, prob: Problem, hard: bool) -> Iterator[Check]:
    if 1.0 not in meas_by_a:
        return
    ref = meas_by_a[1.0]
    r, q = (prob.p + 1) / (2 * prob.p + 1), 1 / (2 * prob.p + 1)
    worst = 0.0
    for a, meas in meas_by_a.items():
        worst = max(
            worst,
            abs(meas.h / (a**r * ref.h) - 1),
            abs(meas.mu / (a**q * ref.mu) - 1),
        )
    yield Check(
        f"scaling law [p={prob.p:g} c={prob.c:g}]", worst < 1e-7, hard, f"worst relative {worst:.3e}"
    )


def _quadrature_check(prob: Problem, a: float, hard: bool) -> Check:
    bounds = constants(prob)
    line = bounds.line(a)
    lam, m = line
    T = m / lam + 1.0
    rate = prob.c * (lam * T - m) ** prob.p
    # Keep ~50 e-folds inside the Simpson window so its step resolves the decay.
    length = min(200.0, 50.0 / rate)
    worst = 0.0
    for n in (0, 1):
        fast = tail_moment(n, T, line, prob)
        slow = simpson_tail(n, T, line, prob, length=length)
        worst = max(worst, abs(fast / slow - 1))
    return Check(
        f"tail quadrature [p={prob.p:g} c={prob.c:g} a={a:g}]", worst < 1e-10, hard,
        f"relative gap {worst:.3e}",
    )


def run_suite(
    ps: Iterable[float] = DEFAULT_PS,
    cs: Iterable[float] = DEFAULT_CS,
    as_: Iterable[float] = DEFAULT_AS,
    eps: float = 1e-12,
    corrupt: Optional[str] = None,
) -> list[Check]:
    """Run every check over the ``(p, c, a)`` grid.

    ``corrupt`` names a constant (``"c1"`` .. ``"c5"``) to halve before
    checking; it exists to exercise the failure path.
    """
    checks: list[Check] = []
    as_ = tuple(float(a) for a in as_)
    for p, c in itertools.product(ps, cs):
        prob = Problem(float(p), float(c), 1.0)
        hard = prob.p >= 1 or prob.p == 0
        bounds = constants(prob)
        if corrupt:
            bounds = dataclasses.replace(bounds, **{corrupt: getattr(bounds, corrupt) / 2})
        measured = {}
        for a in as_:
            meas = measure(a, prob, eps)
            measured[a] = meas
            checks.extend(_trajectory_checks(meas, bounds, hard))
        checks.extend(_scaling_checks(measured, prob, hard))
        checks.append(_quadrature_check(prob, as_[0], hard))
    return checks
