import math

import numpy as np
import pytest
from scipy.special import gamma as sp_gamma, gammaincc

from genblasius import (
    Bracket,
    DomainError,
    HorizonOverflow,
    NoDecay,
    Problem,
    bracket,
    check_T,
    constants,
    find_T,
    inner_integral,
    tail_moment,
    validate_problem,
)
from genblasius.verify import simpson_tail

NAMED = [(1.0, 14.0), (7.0, 4.0)]


def named_setup(p):
    prob = validate_problem(p, 0.5, 1)
    b = constants(prob)
    br = bracket(prob, b)
    return prob, b, br, b.line(br.a_min)


def test_inner_integral_zero_before_crossing():
    prob = Problem(1.0, 0.5, 1)
    assert inner_integral(0.3, (2.0, 1.0), prob) == 0.0
    assert inner_integral(0.5, (2.0, 1.0), prob) == 0.0


def test_inner_integral_quadratic():
    assert inner_integral(1.5, (2.0, 1.0), Problem(1.0, 0.5, 1)) == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("p", [0.1, 1.0, 2.5, 7.0])
def test_inner_integral_smooth_at_crossing(p):
    prob = Problem(p, 1.0, 1)
    line = (1.3, 0.7)
    t0 = 0.7 / 1.3
    d = 1e-6
    right = inner_integral(t0 + d, line, prob)
    assert inner_integral(t0, line, prob) == 0.0
    assert right >= 0
    # difference quotient is bounded by the integrand (1.3 d)^p, which -> 0
    assert right / d <= (1.3 * d) ** p


def closed_form_tails(p, c, lam):
    q = p + 1
    k = c / (lam * q)
    return (
        math.gamma(1 / q) / (q * k ** (1 / q)) / lam,
        math.gamma(2 / q) / (q * k ** (2 / q)) / lam**2,
    )


@pytest.mark.parametrize("p", [0.1, 1.0, 2.0, 7.0])
@pytest.mark.parametrize("c", [0.5, 1.0])
def test_tail_at_crossing_matches_closed_form(p, c):
    prob = Problem(p, c, 1)
    line = (0.9, 1.4)
    t0 = 1.4 / 0.9
    exact0, exact1 = closed_form_tails(p, c, 0.9)
    assert tail_moment(0, t0, line, prob) == pytest.approx(exact0, rel=1e-11)
    assert tail_moment(1, t0, line, prob) == pytest.approx(exact1, rel=1e-11)


def test_linear_case_exponential_tail():
    c = 0.7
    prob = Problem(0.0, c, 1)
    line = (2.0, 1.0)  # p=0: integrand is exp(-c (s - t0)) past t0
    t0, T = 0.5, 3.0
    expected = math.exp(-c * (T - t0))
    assert tail_moment(0, T, line, prob) == pytest.approx(expected / c, rel=1e-12)
    assert tail_moment(1, T, line, prob) == pytest.approx(expected / c**2, rel=1e-12)


@pytest.mark.parametrize("p, T", NAMED + [(0.1, 50.0)])
def test_tail_matches_incomplete_gamma(p, T):
    prob, _, _, line = named_setup(p)
    lam, m = line
    q = p + 1
    k = prob.c / (lam * q)
    uT = lam * T - m
    expected = sp_gamma(1 / q) * gammaincc(1 / q, k * uT**q) / (q * k ** (1 / q)) / lam
    assert tail_moment(0, T, line, prob) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("p, T", NAMED + [(0.1, 50.0)])
def test_tail_against_resolved_simpson(p, T):
    # one unit past T already holds all of the mass to double precision for
    # these configurations; h = 1e-6 resolves even the p=7 decay rate
    prob, _, _, line = named_setup(p)
    length = 1.0 if p == 7.0 else 200.0
    for n in (0, 1):
        brute = simpson_tail(n, T, line, prob, length=length)
        assert tail_moment(n, T, line, prob) == pytest.approx(brute, rel=1e-12)


def test_tail_domain_checks():
    prob = Problem(1.0, 0.5, 1)
    with pytest.raises(DomainError):
        tail_moment(2, 3.0, (1.0, 1.0), prob)
    with pytest.raises(DomainError):
        tail_moment(0, 0.5, (1.0, 1.0), prob)


def test_degenerate_line_does_not_decay():
    with pytest.raises(NoDecay):
        tail_moment(0, 1.0, (0.0, 0.0), Problem(1.0, 0.5, 1))


@pytest.mark.parametrize("p, T", NAMED)
def test_reference_horizons_certified(p, T):
    prob, b, br, _ = named_setup(p)
    cert = check_T(T, 1e-14, br, prob, b)
    assert cert.valid
    assert cert.T == T


def test_check_T_before_crossing():
    prob, b, br, line = named_setup(1.0)
    t0 = line[1] / line[0]
    cert = check_T(t0 / 2, 1e-3, br, prob, b)
    assert cert.lhs2 == br.a_max
    assert not cert.valid
    # continuity of the split evaluation across t0
    below = check_T(t0 - 1e-9, 1e-3, br, prob, b)
    at = check_T(t0, 1e-3, br, prob, b)
    assert below.lhs1 == pytest.approx(at.lhs1, rel=1e-8)
    assert below.lhs0 == pytest.approx(at.lhs0, rel=1e-8)


def test_check_T_argument_checks(blasius):
    br = bracket(blasius, constants(blasius))
    with pytest.raises(DomainError):
        check_T(10, 0, br, blasius)
    with pytest.raises(DomainError):
        check_T(0, 1e-3, br, blasius)


@pytest.mark.parametrize("p", [0.1, 1.0, 7.0])
def test_left_hand_sides_decrease_in_T(p):
    prob, b, br, line = named_setup(p)
    t0 = line[1] / line[0]
    grid = t0 + np.array([0.25, 0.5, 1, 2, 3, 5])
    certs = [check_T(T, 1e-14, br, prob, b) for T in grid]
    for name in ("lhs2", "lhs1", "lhs0"):
        vals = [getattr(c, name) for c in certs]
        vals = [v for v in vals if v > 0]  # p=7 underflows quickly
        assert all(b < a for a, b in zip(vals, vals[1:])), name


@pytest.mark.parametrize("p, T", NAMED)
def test_find_T_not_above_reference(p, T):
    prob, b, br, _ = named_setup(p)
    cert = find_T(1e-14, br, prob, b)
    assert cert.valid
    assert cert.T <= T


@pytest.mark.parametrize("p", [0.0, 0.1, 1.0, 3.0, 7.0])
def test_find_T_is_smallest(p):
    prob = validate_problem(p, 0.5 if p else 1.0, 1)
    b = constants(prob)
    br = bracket(prob, b)
    cert = find_T(1e-12, br, prob, b)
    t0 = b.line(br.a_min)[1] / b.line(br.a_min)[0]
    assert cert.T >= math.ceil(t0) + 1
    if cert.T - 1 >= math.ceil(t0) + 1:
        assert not check_T(cert.T - 1, 1e-12, br, prob, b).valid


def test_find_T_monotone_in_eps(blasius):
    b = constants(blasius)
    br = bracket(blasius, b)
    assert find_T(1e-2, br, blasius, b).T <= find_T(1e-14, br, blasius, b).T


def test_horizon_overflow():
    prob = validate_problem(1, 0.5, 1e-12)
    b = constants(prob)
    with pytest.raises(HorizonOverflow):
        find_T(1e-14, bracket(prob, b), prob, b)


def test_single_point_bracket():
    prob = validate_problem(2, 1, 1)
    cert = find_T(1e-10, Bracket(0.7, 0.7), prob)
    assert cert.valid and cert.T > 0
