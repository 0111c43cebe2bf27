"""Certified shooting solver for the generalized Blasius equation

    x''' + c x^p x'' = 0,   x(0) = x'(0) = 0,   x'(inf) = beta.
"""
from .estimates import Bracket, BoundsSet, bracket, constants, gamma_fn, h_bounds, lower_line, mu_bounds
from .estimator import BlasiusShootingSolver, check_times
from .exceptions import (
    BlasiusError,
    BracketFailure,
    DomainError,
    HorizonOverflow,
    NoDecay,
    StepUnderflow,
)
from .integrator import IntegratorConfig, Rejection, StepResult, integrate, integrate_fixed, rkf45_step
from .model import Problem, State, Trajectory, rhs, validate_problem
from .shooting import (
    CertificateReport,
    Shot,
    Solution,
    extend,
    profile,
    residual_certificate,
    shoot,
    solve,
)
from .truncation import TruncationCert, check_T, find_T, inner_integral, tail_moment

__version__ = "0.1.0"
