"""Exception hierarchy.

Errors fall in three families that the command line maps to exit codes:
malformed mathematical input (``MathInputError``), precision exhaustion
(``InsufficientPrecision``) and failed verification (``VerificationError``).
"""


class Z4LiftError(Exception):
    """Base class for all package errors."""


class MathInputError(Z4LiftError, ValueError):
    """The input is well formed but mathematically invalid."""


class NotASquare(MathInputError):
    pass


class InvalidWittInput(MathInputError):
    pass


class InvalidParameter(MathInputError):
    pass


class UnsupportedPlace(MathInputError):
    pass


class NotTotallyRamified(MathInputError):
    pass


class UnsupportedDegree(MathInputError):
    pass


class ValueNotUnit(MathInputError):
    pass


class TrivialCharacter(MathInputError):
    pass


class InsufficientPrecision(Z4LiftError, ArithmeticError):
    """A zero/nonzero decision was needed on a value that is zero to precision."""


class PrecisionExhausted(InsufficientPrecision):
    pass


class VerificationError(Z4LiftError):
    """A certificate check failed."""


class HintNotCertifying(VerificationError):
    pass


class NonSeparable(VerificationError):
    pass


class IdentityFailure(VerificationError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MismatchError(VerificationError):
    pass


class ValueGroupObstruction(VerificationError):
    pass


class NonTermination(VerificationError):
    pass
