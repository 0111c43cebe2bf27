"""Adaptive Runge-Kutta-Fehlberg 4(5) integration of the shooting IVP.

The third-order equation is integrated as the first-order system
``(x, x', x'')' = (x', x'', -c x^p x'')``.  Step control uses the classical
Fehlberg tableau; the local error is the difference of the embedded 4th and
5th order solutions measured in a mixed absolute/relative max-norm.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

from .exceptions import DomainError, StepUnderflow
from .model import Problem, State, Trajectory

__all__ = [
    "IntegratorConfig",
    "StepResult",
    "Rejection",
    "rkf45_step",
    "integrate",
    "integrate_fixed",
]

# Fehlberg (1969) coefficients.
A21 = 1 / 4
A31, A32 = 3 / 32, 9 / 32
A41, A42, A43 = 1932 / 2197, -7200 / 2197, 7296 / 2197
A51, A52, A53, A54 = 439 / 216, -8.0, 3680 / 513, -845 / 4104
A61, A62, A63, A64, A65 = -8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40

B4 = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0)
B5 = (16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)
# B5 - B4, the local error weights.
E = (1 / 360, 0.0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55)

_SCALE_FLOOR = 1e-30
_GROW_MAX = 5.0
_SHRINK_MIN = 0.1


@dataclass(frozen=True)
class IntegratorConfig:
    """Step-control settings.

    ``h_max=None`` means one tenth of the integration interval.
    ``max_steps`` bounds accepted plus rejected attempts; running into it
    means the problem has turned stiff on the requested interval.
    """

    tolerance: float = 1e-10
    h_init: float = 1e-3
    h_min: float = 1e-12
    h_max: Optional[float] = None
    safety: float = 0.9
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance!r}")
        if not 0 < self.safety < 1:
            raise DomainError(f"safety must lie in (0, 1), got {self.safety!r}")
        if not 0 < self.h_min <= self.h_init:
            raise DomainError("need 0 < h_min <= h_init")
        if self.h_max is not None and self.h_max < self.h_init:
            raise DomainError("need h_init <= h_max")

    def resolved_h_max(self, span: float) -> float:
        return self.h_max if self.h_max is not None else span / 10


class StepResult(NamedTuple):
    state: State
    error_estimate: float
    h_next: float


class Rejection(NamedTuple):
    h_retry: float
    error_estimate: float


def _fehlberg(t, x, dx, d2x, h, p, c):
    """One Fehlberg step on raw floats.

    Returns the 5th-order update and the scaled error (in units of the
    tolerance-free mixed norm, i.e. ``max |e_i| / (1 + |y_i|)``).
    """
    # Stage k_i = (x', x'', x''') at the stage point; x' and x'' are linear
    # in the stage inputs so only the x''' component needs the power.
    k1x, k1v, k1w = dx, d2x, -c * x**p * d2x

    x2 = x + h * A21 * k1x
    v2 = dx + h * A21 * k1v
    w2 = d2x + h * A21 * k1w
    k2x, k2v, k2w = v2, w2, -c * x2**p * w2

    x3 = x + h * (A31 * k1x + A32 * k2x)
    v3 = dx + h * (A31 * k1v + A32 * k2v)
    w3 = d2x + h * (A31 * k1w + A32 * k2w)
    k3x, k3v, k3w = v3, w3, -c * x3**p * w3

    x4 = x + h * (A41 * k1x + A42 * k2x + A43 * k3x)
    v4 = dx + h * (A41 * k1v + A42 * k2v + A43 * k3v)
    w4 = d2x + h * (A41 * k1w + A42 * k2w + A43 * k3w)
    k4x, k4v, k4w = v4, w4, -c * x4**p * w4

    x5 = x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x)
    v5 = dx + h * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v)
    w5 = d2x + h * (A51 * k1w + A52 * k2w + A53 * k3w + A54 * k4w)
    k5x, k5v, k5w = v5, w5, -c * x5**p * w5

    x6 = x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x)
    v6 = dx + h * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v)
    w6 = d2x + h * (A61 * k1w + A62 * k2w + A63 * k3w + A64 * k4w + A65 * k5w)
    k6x, k6v, k6w = v6, w6, -c * x6**p * w6

    b1, _, b3, b4, b5, b6 = B5
    nx = x + h * (b1 * k1x + b3 * k3x + b4 * k4x + b5 * k5x + b6 * k6x)
    nv = dx + h * (b1 * k1v + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v)
    nw = d2x + h * (b1 * k1w + b3 * k3w + b4 * k4w + b5 * k5w + b6 * k6w)

    e1, _, e3, e4, e5, e6 = E
    ex = abs(h * (e1 * k1x + e3 * k3x + e4 * k4x + e5 * k5x + e6 * k6x))
    ev = abs(h * (e1 * k1v + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v))
    ew = abs(h * (e1 * k1w + e3 * k3w + e4 * k4w + e5 * k5w + e6 * k6w))
    err = max(
        ex / max(1.0 + max(abs(x), abs(nx)), _SCALE_FLOOR),
        ev / max(1.0 + max(abs(dx), abs(nv)), _SCALE_FLOOR),
        ew / max(1.0 + max(abs(d2x), abs(nw)), _SCALE_FLOOR),
    )
    return nx, nv, nw, err


def _grow(h, err, tol, safety):
    if err == 0.0:
        return h * _GROW_MAX
    return h * min(_GROW_MAX, max(_SHRINK_MIN, safety * (tol / err) ** 0.2))


def _shrink(h, err, tol, safety):
    return h * max(_SHRINK_MIN, safety * (tol / err) ** 0.25)


def rkf45_step(
    s: State, prob: Problem, h: float, cfg: IntegratorConfig
) -> Union[StepResult, Rejection]:
    """Attempt one adaptive step of size ``h`` from ``s``.

    Returns a :class:`StepResult` when the scaled error is within
    ``cfg.tolerance`` and a :class:`Rejection` carrying a smaller retry
    step otherwise.

    Raises
    ------
    StepUnderflow
        If ``h`` or the retry step falls below ``cfg.h_min``.
    """
    if h < cfg.h_min:
        raise StepUnderflow(f"step {h!r} below h_min={cfg.h_min!r} at t={s.t!r}")
    if s.x < 0 and not float(prob.p).is_integer():
        raise DomainError(f"x = {s.x!r} < 0 at t = {s.t!r} with non-integer p")
    nx, nv, nw, err = _fehlberg(s.t, s.x, s.dx, s.d2x, h, prob.p, prob.c)
    tol = cfg.tolerance
    if err <= tol:
        return StepResult(State(s.t + h, nx, nv, nw), err, _grow(h, err, tol, cfg.safety))
    h_retry = _shrink(h, err, tol, cfg.safety)
    if h_retry < cfg.h_min:
        raise StepUnderflow(f"retry step {h_retry!r} below h_min={cfg.h_min!r} at t={s.t!r}")
    return Rejection(h_retry, err)


def integrate(
    a: float,
    prob: Problem,
    t_end: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    stops: Sequence[float] = (),
) -> Trajectory:
    """Integrate from ``(0, 0, 0, a)`` to ``t_end`` with adaptive steps.

    Every accepted step is stored; the last step is clamped so the final
    sample sits exactly at ``t_end``.  Steps are clamped the same way at
    every time in ``stops`` (values outside ``(0, t_end)`` are ignored), so
    those times appear verbatim among the samples.
    """
    if not a > 0:
        raise DomainError(f"initial curvature must be positive, got {a!r}")
    if not t_end > 0:
        raise DomainError(f"t_end must be positive, got {t_end!r}")

    p, c = prob.p, prob.c
    tol, safety, h_min = cfg.tolerance, cfg.safety, cfg.h_min
    h_max = cfg.resolved_h_max(t_end)
    slack = -10.0 * tol
    integer_p = float(p).is_integer()

    targets = sorted({float(v) for v in stops if 0 < v < t_end})
    targets.append(float(t_end))
    k = 0

    t, x, dx, d2x = 0.0, 0.0, 0.0, float(a)
    samples = [State(t, x, dx, d2x)]
    h = min(cfg.h_init, h_max)
    steps = 0
    attempts = 0
    while t < t_end:
        attempts += 1
        if attempts > cfg.max_steps:
            raise StepUnderflow(
                f"step budget {cfg.max_steps} exhausted at t={t!r} (h={h!r}); "
                "the equation is stiff on this interval"
            )
        while targets[k] <= t:
            k += 1
        target = targets[k]
        h_free = h
        clamped = t + h >= target
        if clamped:
            h = target - t
        nx, nv, nw, err = _fehlberg(t, x, dx, d2x, h, p, c)
        if err > tol:
            h = _shrink(h, err, tol, safety)
            if h < h_min:
                raise StepUnderflow(f"step {h!r} below h_min={h_min!r} at t={t!r}")
            continue
        if clamped:
            t = target
            k += 1
        else:
            t += h
        x, dx, d2x = nx, nv, nw
        if x < slack or dx < slack or d2x < slack:
            raise DomainError(
                f"positivity lost at t={t!r}: x={x!r}, x'={dx!r}, x''={d2x!r}"
            )
        if x < 0 and not integer_p:
            x = 0.0
        samples.append(State(t, x, dx, d2x))
        steps += 1
        h = min(max(_grow(h, err, tol, safety), h_free if clamped else 0.0), h_max)
    return Trajectory(tuple(samples), steps, tol, float(a))


def integrate_fixed(a: float, prob: Problem, t_end: float, n_steps: int) -> Trajectory:
    """Integrate with ``n_steps`` equal steps and no error control.

    Used for convergence-order checks of the tableau.
    """
    h = t_end / n_steps
    p, c = prob.p, prob.c
    t, x, dx, d2x = 0.0, 0.0, 0.0, float(a)
    samples = [State(t, x, dx, d2x)]
    for i in range(1, n_steps + 1):
        x, dx, d2x, _ = _fehlberg(t, x, dx, d2x, h, p, c)
        t = t_end if i == n_steps else i * h
        samples.append(State(t, x, dx, d2x))
    return Trajectory(tuple(samples), n_steps, 0.0, float(a))
