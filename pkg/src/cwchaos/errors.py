"""Exception hierarchy shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class CriticalPoint(DomainError):
    """The operation needs a finite limiting variance, which (beta, h) = (1, 0) lacks."""


class DegenerateVariance(DomainError):
    """Target variance does not exceed the binomial variance a(1 - a)."""


class RegimeError(DomainError):
    """The parameters fall outside the regime an operation is defined for."""


class UnnormalizedPmf(DomainError):
    """A normalized pmf was required."""
