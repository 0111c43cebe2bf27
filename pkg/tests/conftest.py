import functools

import pytest

from genblasius import validate_problem
from genblasius.shooting import solve

# (p, c, beta, pinned horizon) for the three reference experiments
NAMED_CASES = {
    "blasius": (1.0, 0.5, 1.0, 14.0),
    "p7": (7.0, 0.5, 1.0, 4.0),
    "p01": (0.1, 0.5, 1.0, 50.0),
}
LADDER = (1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14)


@functools.lru_cache(maxsize=None)
def named_solution(case, eps):
    p, c, beta, T = NAMED_CASES[case]
    return solve(validate_problem(p, c, beta), eps, horizon=T)


@pytest.fixture
def blasius():
    return validate_problem(1, 0.5, 1)


@pytest.fixture
def linear():
    return validate_problem(0, 1, 1)
