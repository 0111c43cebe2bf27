"""Problem definition and trajectory containers.

The boundary value problem is

    x''' + c * x**p * x'' = 0,   x(0) = x'(0) = 0,   x'(inf) = beta

and every numerical routine works on the equivalent initial value problem
with the unknown curvature ``x''(0) = a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .exceptions import DomainError

__all__ = ["Problem", "State", "Trajectory", "validate_problem", "rhs"]


@dataclass(frozen=True)
class Problem:
    """Parameters ``(p, c, beta)`` of the generalized Blasius equation.

    Use :func:`validate_problem` to build one from untrusted input.
    ``proven_regime`` is False for ``p < 1``: the solver still runs there,
    but the existence/uniqueness theory behind the bracket and the
    horizon certificate only covers ``p >= 1``. ``p = 0`` (the linear
    equation) is accepted because its closed-form solution makes a handy
    end-to-end oracle.
    """

    p: float
    c: float
    beta: float
    proven_regime: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "proven_regime", self.p >= 1)


class State(NamedTuple):
    """One trajectory point ``(t, x, x', x'')``."""

    t: float
    x: float
    dx: float
    d2x: float


@dataclass(frozen=True)
class Trajectory:
    samples: tuple[State, ...]
    steps: int
    tolerance: float
    a: float

    @property
    def final(self) -> State:
        return self.samples[-1]

    def as_arrays(self):
        """Return ``(t, x, dx, d2x)`` as numpy arrays."""
        import numpy as np

        arr = np.asarray(self.samples, dtype=float)
        return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]


def validate_problem(p: float, c: float, beta: float) -> Problem:
    """Check raw parameters and return a :class:`Problem`.

    Raises
    ------
    DomainError
        If any value is non-finite, ``c <= 0``, ``beta < 0`` or ``p < 0``.
    """
    try:
        p, c, beta = float(p), float(c), float(beta)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"parameters must be real numbers: {exc}") from None
    for name, value in (("p", p), ("c", c), ("beta", beta)):
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}")
    if c <= 0:
        raise DomainError(f"c must be positive, got {c!r}")
    if beta < 0:
        raise DomainError(f"beta must be non-negative, got {beta!r}")
    if p < 0:
        raise DomainError(f"p must be non-negative, got {p!r}")
    return Problem(p, c, beta)


def rhs(s: State, prob: Problem) -> tuple[float, float, float]:
    """First-order form of the ODE: ``(x', x'', -c x^p x'')``."""
    x = s.x
    if x < 0 and not float(prob.p).is_integer():
        raise DomainError(f"x = {x!r} < 0 cannot be raised to non-integer power p = {prob.p!r}")
    return s.dx, s.d2x, -prob.c * x**prob.p * s.d2x
