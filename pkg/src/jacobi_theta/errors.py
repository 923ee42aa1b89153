"""Exception types raised across the package.

Every error carries a stable ``code`` (the class name) so the command line
front end can emit it in structured error records.
"""


class ThetaError(ValueError):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# quadratic forms
class NotSymmetric(ThetaError):
    pass


class OddDiagonal(ThetaError):
    pass


class NotPositiveDefinite(ThetaError):
    pass


class OddRank(ThetaError):
    pass


class DimensionMismatch(ThetaError):
    pass


class LinearlyDependent(ThetaError):
    pass


class Undefined(ThetaError):
    pass


class ZeroArgument(ThetaError):
    pass


class NonUnitValue(ThetaError):
    pass


# enumeration
class RadiusTooLarge(ThetaError):
    pass


class InadmissibleResidue(ThetaError):
    pass


# series
class NonconvergentInput(ThetaError):
    pass


class TruncationFailure(ThetaError):
    pass


class OutOfRange(ThetaError):
    pass


class IndexOutOfRange(ThetaError):
    pass


class SingularGram(ThetaError):
    pass


# group
class NotUnimodular(ThetaError):
    pass


class NotCongruent(ThetaError):
    pass


# verification
class InadmissibleSpec(ThetaError):
    pass


class HypothesisViolation(ThetaError):
    pass


class NegativeD(ThetaError):
    pass


class IllConditionedFit(ThetaError):
    pass


# command line
class ConfigError(ThetaError):
    pass
