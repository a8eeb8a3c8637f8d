"""Exception hierarchy shared by every layer of the package."""


class JacobianError(Exception):
    """Base class for all errors raised by jacobian_forms."""


class SpecError(JacobianError):
    """Malformed input: field, curve, point or spec-file data."""


class DivisionByZero(JacobianError, ZeroDivisionError):
    pass


class ZeroDenominator(DivisionByZero):
    pass


class NonInvertible(JacobianError):
    """A function-field element whose norm vanishes."""


class SingularPoint(JacobianError):
    pass


class PrecisionExhausted(JacobianError):
    """Series precision reached the configured cap before resolving."""


class IncompleteSupport(JacobianError):
    """Computed principal divisor has nonzero degree: zeros/poles lie outside the universe."""


class InsufficientGenerators(JacobianError):
    pass


class DimensionMismatch(JacobianError):
    pass


class SingularTransform(JacobianError):
    pass


class SizeMismatch(JacobianError):
    pass


class KGeneralityFailure(JacobianError):
    pass


class ImperfectPairing(JacobianError):
    pass


class PivotSearchExhausted(JacobianError):
    pass


class PreconditionError(JacobianError, ValueError):
    """An operation was called outside its documented domain."""
