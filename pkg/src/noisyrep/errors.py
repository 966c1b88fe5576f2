"""Exception types raised across the package."""


class NoisyRepeaterError(Exception):
    """Base class for all package errors."""


class EmptyInput(NoisyRepeaterError, ValueError):
    pass


class InternalAssertion(NoisyRepeaterError, AssertionError):
    """A consistency check failed; indicates a bug rather than bad input."""


class BadDimension(NoisyRepeaterError, ValueError):
    pass


class FamilyMismatch(NoisyRepeaterError, ValueError):
    """Operators do not share a common eigenbasis decomposition."""


class NotHermitian(NoisyRepeaterError, ValueError):
    pass


class SizeLimit(NoisyRepeaterError, ValueError):
    pass


class BadQber(NoisyRepeaterError, ValueError):
    pass


class DomainError(NoisyRepeaterError, ValueError):
    pass


class NoCrossing(NoisyRepeaterError):
    pass


class MultipleCrossings(NoisyRepeaterError):
    pass
