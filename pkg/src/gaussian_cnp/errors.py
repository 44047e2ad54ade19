"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the command-line layer
never needs its own lookup table.
"""


class CNPError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParseError(CNPError):
    exit_code = 2


class OddDimension(CNPError, ValueError):
    exit_code = 2


class InvalidOp(CNPError, ValueError):
    exit_code = 2


class NotSymplectic(InvalidOp):
    exit_code = 2


class DimensionMismatch(CNPError, ValueError):
    exit_code = 2


class InvalidParameter(CNPError, ValueError):
    exit_code = 3


class InvalidCovariance(CNPError, ValueError):
    """Matrix is not a physical covariance matrix.

    ``failed`` lists the violated checks by name (``symmetric``, ``positive``,
    ``uncertainty``).
    """

    exit_code = 3

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class NotPositiveDefinite(CNPError, ValueError):
    exit_code = 3


class NotHermitian(CNPError, ValueError):
    exit_code = 3


class NotPure(CNPError, ValueError):
    exit_code = 3


class AuditFailure(CNPError):
    exit_code = 4


class UnsupportedModeCount(CNPError, ValueError):
    exit_code = 5


class CrossCheckFailure(CNPError, ArithmeticError):
    """Two independent computation paths disagree; always a defect."""

    exit_code = 6


class PairingFailure(CNPError, ArithmeticError):
    exit_code = 6


class IndexOutOfRange(CNPError, IndexError):
    exit_code = 7


class DuplicateIndex(CNPError, ValueError):
    exit_code = 7
