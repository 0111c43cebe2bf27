import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from genblasius import (
    DomainError,
    bracket,
    constants,
    gamma_fn,
    h_bounds,
    lower_line,
    mu_bounds,
    validate_problem,
)


def gamma_oracle(z):
    with mpmath.workdps(40):
        return float(mpmath.gamma(mpmath.mpf(z)))


@pytest.mark.parametrize(
    "z, expected",
    [(0.5, math.sqrt(math.pi)), (1, 1.0), (4, 6.0), (1 / 3, 2.678938534707747)],
)
def test_gamma_known_values(z, expected):
    assert gamma_fn(z) == pytest.approx(expected, rel=1e-13)


@given(st.floats(1e-6, 50))
def test_gamma_against_high_precision(z):
    assert gamma_fn(z) == pytest.approx(gamma_oracle(z), rel=1e-13)


@pytest.mark.parametrize("z", [0, -1, -0.5, math.nan, math.inf])
def test_gamma_domain(z):
    with pytest.raises(DomainError):
        gamma_fn(z)


def test_blasius_constants():
    b = constants(validate_problem(1, 0.5, 1))
    # closed forms; commonly quoted 4-digit c1/c3 values are off by ~3e-4
    assert b.c2 == pytest.approx(2.0443, abs=5e-4)
    assert b.c3 == pytest.approx(2.3662, abs=5e-4)
    assert b.c1 == pytest.approx(2.3971, abs=5e-4)
    assert b.c2 == pytest.approx(2.0444127304032755, rel=1e-13)
    assert b.c1 == pytest.approx(2.3968589578656054, rel=1e-13)


def test_linear_edge_constants():
    b = constants(validate_problem(0, 1, 1))
    assert b.c2 == pytest.approx(1, rel=1e-14)
    assert b.c3 == pytest.approx(1, rel=1e-14)


@pytest.mark.parametrize("p", [1, 2, 3, 7])
@pytest.mark.parametrize("c", [0.5, 1, 2])
def test_constant_ordering(p, c):
    b = constants(validate_problem(p, c, 1))
    for v in (b.c1, b.c2, b.c3, b.c4, b.c5):
        assert v > 0 and math.isfinite(v)
    assert b.c1 > b.c3 / b.c2
    assert b.c1 > b.c2
    assert b.c5 >= b.c4


def test_h_bounds_vanish_at_zero():
    b = constants(validate_problem(1, 0.5, 1))
    lo, hi = h_bounds(1e-30, b)
    assert 0 < lo < hi < 1e-18


def test_h_bounds_linear_case_tight():
    prob = validate_problem(0, 1, 1)
    lo, hi = h_bounds(2.0, constants(prob))
    assert lo == pytest.approx(2.0, rel=1e-14)  # exact h(a) = a / c
    assert hi > lo


def test_h_bounds_blasius_value():
    b = constants(validate_problem(1, 0.5, 1))
    a = 0.332057336215
    lo, hi = h_bounds(a, b)
    assert lo == pytest.approx(b.c2 * a ** (2 / 3), rel=1e-15)
    assert lo < 1 < hi


def test_mu_bounds_linear_case_contains_exact():
    lo, hi = mu_bounds(1.0, constants(validate_problem(0, 1, 1)))
    # the lower bound is attained at p=0 (c4 = 1), so allow rounding
    assert lo - 1e-14 <= 1.0 <= hi


@given(a=st.floats(1e-6, 1e6), p=st.sampled_from([0.0, 0.1, 1.0, 3.0, 7.0]))
def test_mu_bound_ratio_is_scale_free(a, p):
    b = constants(validate_problem(p, 0.5, 1))
    lo1, hi1 = mu_bounds(1.0, b)
    lo, hi = mu_bounds(a, b)
    assert lo / hi == pytest.approx(lo1 / hi1, rel=1e-12)


def test_mu_bounds_vanish_at_zero():
    lo, hi = mu_bounds(1e-60, constants(validate_problem(1, 0.5, 1)))
    assert 0 < lo <= hi < 1e-19


@pytest.mark.parametrize(
    "p, expected",
    [(1, (0.2694860459, 0.3420953216)), (7, (0.3733978388, 0.3805482427))],
)
def test_bracket_reproduces_reference_interval(p, expected):
    prob = validate_problem(p, 0.5, 1)
    br = bracket(prob, constants(prob))
    assert br.a_min == pytest.approx(expected[0], abs=1e-9)
    assert br.a_max == pytest.approx(expected[1], abs=1e-9)


def test_bracket_linear_case_upper_end_is_exact():
    prob = validate_problem(0, 1, 1)
    br = bracket(prob, constants(prob))
    assert br.a_max == pytest.approx(1.0, rel=1e-14)
    assert br.a_min < br.a_max


def test_bracket_rejects_zero_beta():
    prob = validate_problem(1, 0.5, 0)
    with pytest.raises(DomainError):
        bracket(prob, constants(prob))


@given(beta=st.floats(1e-3, 1e3), p=st.sampled_from([0.1, 1.0, 2.0, 7.0]))
def test_bracket_scales_with_beta(beta, p):
    one = validate_problem(p, 0.5, 1)
    other = validate_problem(p, 0.5, beta)
    b = constants(one)
    e = (2 * p + 1) / (p + 1)
    br1, br = bracket(one, b), bracket(other, b)
    assert br.a_min == pytest.approx(br1.a_min * beta**e, rel=1e-12)
    assert br.a_max == pytest.approx(br1.a_max * beta**e, rel=1e-12)
    lo, _ = h_bounds(br.a_max, b)
    _, hi = h_bounds(br.a_min, b)
    assert lo == pytest.approx(beta, rel=1e-12)
    assert hi == pytest.approx(beta, rel=1e-12)


def test_lower_line_matches_h_lower_bound():
    b = constants(validate_problem(1, 0.5, 1))
    a = 0.2694860459
    lam, m = lower_line(a, b)
    assert lam == h_bounds(a, b)[0]
    assert lam == pytest.approx(2.0443 * a ** (2 / 3), rel=1e-4)
    assert m == pytest.approx(2.3662 * a ** (1 / 3), rel=2e-4)
    assert m / lam > 0


@given(a=st.floats(1e-4, 1e3), p=st.sampled_from([0.0, 0.1, 1.0, 7.0]))
def test_lower_line_power_law(a, p):
    b = constants(validate_problem(p, 1.0, 1))
    lam8, _ = lower_line(8 * a, b)
    lam, _ = lower_line(a, b)
    assert lam8 == pytest.approx(8 ** ((p + 1) / (2 * p + 1)) * lam, rel=1e-12)


def test_curvature_must_be_positive():
    b = constants(validate_problem(1, 0.5, 1))
    for fn in (h_bounds, mu_bounds, lower_line):
        with pytest.raises(DomainError):
            fn(0.0, b)
