"""Exception hierarchy shared by every module."""


class AnnealError(Exception):
    """Base class for all errors raised by gibbsanneal."""


class InvalidParameter(AnnealError, ValueError):
    pass


class DegenerateModel(AnnealError, ValueError):
    """Z(-inf) = 0: the model has no mass at Hamiltonian value 0."""


class OutOfRange(AnnealError, ValueError):
    pass


class IterationLimit(AnnealError, RuntimeError):
    pass


class AllMassLost(AnnealError, RuntimeError):
    """Every term of a PPE V-side average underflowed to zero."""


class TooLarge(AnnealError, ValueError):
    """Brute-force enumeration beyond the desk-scale cap."""


class NotAntiferro(AnnealError, ValueError):
    pass


class InfeasibleSampleSize(AnnealError, RuntimeError):
    """Requested sample count is beyond what can be run without an explicit override."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k
