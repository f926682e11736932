"""Exception hierarchy shared by every module in the package."""


class MbrError(Exception):
    """Base class. ``code`` is the machine-readable name reported by the CLI."""

    code = "Error"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.details = details


class NotPrime(MbrError):
    code = "NotPrime"


class DivisionByZero(MbrError, ZeroDivisionError):
    code = "DivisionByZero"


class FieldMismatch(MbrError):
    code = "FieldMismatch"


class DimensionMismatch(MbrError):
    code = "DimensionMismatch"


class Singular(MbrError):
    code = "Singular"


class Inconsistent(MbrError):
    code = "Inconsistent"


class Underdetermined(MbrError):
    code = "Underdetermined"


class BadPoints(MbrError):
    code = "BadPoints"


class RepeatedPoint(BadPoints):
    code = "RepeatedPoint"


class FieldTooSmall(MbrError):
    code = "FieldTooSmall"


class TooLarge(MbrError):
    code = "TooLarge"


class BudgetExceeded(TooLarge):
    code = "BudgetExceeded"


class ZeroCode(MbrError):
    code = "ZeroCode"


class BadIndex(MbrError, IndexError):
    code = "BadIndex"


class BadParams(MbrError, ValueError):
    code = "BadParams"


class OddProduct(BadParams):
    code = "OddProduct"


class DegreeTooLarge(BadParams):
    code = "DegreeTooLarge"


class MdsViolation(MbrError):
    code = "MdsViolation"


class PropertyViolation(MbrError):
    code = "PropertyViolation"


class LengthMismatch(MbrError):
    code = "LengthMismatch"


class WrongHelpers(MbrError):
    code = "WrongHelpers"


class WrongHelperCount(WrongHelpers):
    code = "WrongHelperCount"


class WrongUnit(MbrError):
    code = "WrongUnit"


class AlreadyFailed(MbrError):
    code = "AlreadyFailed"


class NotFailed(MbrError):
    code = "NotFailed"


class InsufficientAlive(MbrError):
    code = "InsufficientAlive"


class FormatError(MbrError):
    code = "FormatError"
