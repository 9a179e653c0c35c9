"""Exception hierarchy.

Three families map onto CLI exit codes: ``InputError`` (bad syntax or
usage, exit 1), ``PreconditionError`` (mathematical hypothesis not met,
exit 2) and ``VerificationFailure`` (a proven inequality or identity did
not hold, exit 3; always an implementation bug).
"""


class GapBoundError(Exception):
    pass


class InputError(GapBoundError):
    pass


class PreconditionError(GapBoundError):
    pass


class VerificationFailure(GapBoundError):
    """Raised when a self-check that must succeed fails.

    ``dump`` carries whatever data is needed to reproduce the failure.
    """

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump or {}


# exact-algebra
class DivideByZeroPolynomial(PreconditionError, ZeroDivisionError):
    pass


class ZeroPolynomial(PreconditionError):
    pass


class ZeroFunction(PreconditionError):
    pass


class ConstantFunction(PreconditionError):
    pass


class HeterogeneousCluster(PreconditionError):
    pass


# series-engine
class WindowTooSmall(PreconditionError):
    pass


class DivisorNotUnit(PreconditionError, ZeroDivisionError):
    pass


class InnerSeriesNotVanishing(PreconditionError):
    pass


class NotALocalParameter(PreconditionError):
    pass


class ConstantParameter(PreconditionError):
    pass


# gap-analysis
class NotNormalized(PreconditionError):
    pass


class PolynomialInParameter(PreconditionError):
    pass


class NegativeWeight(VerificationFailure):
    pass


class BoundViolation(VerificationFailure):
    pass


# lemma-lab
class InsufficientGapTerms(PreconditionError):
    pass


class ValuationMismatch(VerificationFailure):
    pass


class PartitionGap(VerificationFailure):
    pass


# harness
class ExpressionSyntaxError(InputError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NonIntegerExponent(ExpressionSyntaxError):
    pass


class ConfigError(InputError):
    pass
