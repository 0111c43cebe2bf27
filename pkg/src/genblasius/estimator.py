"""scikit-learn style front end.

``fit`` solves the boundary value problem for the configured parameters;
``predict`` maps similarity-variable values ``t`` to ``x(t)`` and
``transform`` to the full ``(x, x', x'')`` profile.  Hyper-parameters are
plain constructor arguments, so ``get_params``/``set_params``/``clone``
work as usual.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .exceptions import DomainError
from .model import validate_problem
from .shooting import profile, residual_certificate, solve

__all__ = ["BlasiusShootingSolver", "check_times"]


def check_times(X) -> np.ndarray:
    """Coerce ``X`` to a 1-d float array of finite, non-negative times.

    Accepts a scalar, a 1-d sequence, or an ``(n, 1)`` column.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise DomainError(f"expected a single column of times, got shape {arr.shape}")
        arr = arr[:, 0]
    arr = check_array(arr, ensure_2d=False, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError(f"expected 1-d times, got shape {arr.shape}")
    if np.any(arr < 0):
        raise DomainError("times must be non-negative")
    return arr


class BlasiusShootingSolver(TransformerMixin, BaseEstimator):
    """Solve ``x''' + c x^p x'' = 0``, ``x(0) = x'(0) = 0``, ``x'(inf) = beta``.

    Parameters
    ----------
    p, c, beta : float
        Equation exponent, coefficient and far-field slope.
    eps : float
        Tolerance for the horizon certificate, the integrator and the
        bisection exit.
    horizon : float or None
        Fixed truncation horizon.  ``None`` picks the smallest certified
        integer horizon.

    Attributes
    ----------
    solution_ : Solution
    a_star_ : float
        Solved initial curvature ``x''(0)``.
    horizon_ : float
    h_est_, mu_est_ : float
        Slope and offset of the slant asymptote ``h t - mu``.
    n_iter_ : int
        Bisection iterations.
    """

    def __init__(self, p=1.0, c=0.5, beta=1.0, eps=1e-10, horizon=None):
        self.p = p
        self.c = c
        self.beta = beta
        self.eps = eps
        self.horizon = horizon

    def fit(self, X=None, y=None):
        """Run the solver.  ``X`` and ``y`` are ignored."""
        prob = validate_problem(self.p, self.c, self.beta)
        if not (np.isfinite(self.eps) and self.eps > 0):
            raise DomainError(f"eps must be positive, got {self.eps!r}")
        sol = solve(prob, float(self.eps), horizon=self.horizon)
        self.problem_ = prob
        self.solution_ = sol
        self.a_star_ = sol.a_star
        self.horizon_ = sol.T
        self.h_est_ = sol.h_est
        self.mu_est_ = sol.mu_est
        self.n_iter_ = sol.iterations
        return self

    def transform(self, X):
        """``(n, 3)`` array of ``x, x', x''`` at the times in ``X``."""
        check_is_fitted(self, "solution_")
        return profile(self.solution_, check_times(X))

    def predict(self, X):
        """``x(t)`` at the times in ``X``."""
        return self.transform(X)[:, 0]

    def certificate(self, tol=1e-7):
        check_is_fitted(self, "solution_")
        return residual_certificate(self.solution_, tol=tol)
