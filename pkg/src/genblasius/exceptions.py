"""Exception hierarchy shared by the solver modules."""


class BlasiusError(Exception):
    """Base class for all solver failures."""


class DomainError(BlasiusError, ValueError):
    """An input or an intermediate state lies outside the admissible domain."""


class StepUnderflow(BlasiusError, ArithmeticError):
    """The adaptive integrator needed a step below ``h_min``."""


class NoDecay(BlasiusError, ArithmeticError):
    """The lower-bound line never rises enough to make a tail integral decay."""


class HorizonOverflow(BlasiusError):
    """No certified truncation horizon exists below the search cap."""


class BracketFailure(BlasiusError):
    """The endpoint shots of the analytic bracket do not straddle the target slope."""
