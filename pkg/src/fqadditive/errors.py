"""Exception hierarchy shared by every module."""


class FqAdditiveError(Exception):
    """Base class for all toolkit errors."""


class NotPrime(FqAdditiveError, ValueError):
    pass


class TooLarge(FqAdditiveError, ValueError):
    pass


class ZeroDivisor(FqAdditiveError, ZeroDivisionError):
    pass


class PrecisionTooLow(FqAdditiveError, ValueError):
    pass


class SupportViolation(FqAdditiveError, ValueError):
    pass


class EmptySet(FqAdditiveError, ValueError):
    pass


class ZeroDilate(FqAdditiveError, ValueError):
    pass


class DomainViolation(FqAdditiveError, ValueError):
    pass


class ZeroFunction(FqAdditiveError, ValueError):
    pass


class SpanCheckOverflow(FqAdditiveError, ValueError):
    pass


class DegenerateDensity(FqAdditiveError, ValueError):
    pass


class ScaleTooSmall(FqAdditiveError, ValueError):
    pass


class NotTranslationInvariant(FqAdditiveError, ValueError):
    pass


class AmbientOverflow(FqAdditiveError, ValueError):
    pass


class NotFoundAtResolution(FqAdditiveError, RuntimeError):
    pass


class PreconditionViolation(FqAdditiveError, ValueError):
    pass


class InvariantViolation(FqAdditiveError, AssertionError):
    """Raised when a proven postcondition fails numerically; indicates a bug."""
