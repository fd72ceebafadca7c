"""Error taxonomy shared by every layer of the package.

Each class maps to one failure mode a caller can meaningfully react to;
the CLI translates them to exit codes (parse/usage -> 1, data/validation
-> 2, cap exceeded -> 3).
"""


class GordianError(Exception):
    """Base class for all package errors."""


class ParseError(GordianError):
    """Malformed input text (knot expression, matrix literal, flag value).

    Carries the byte offset of the first offending character when known.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class ShapeError(GordianError):
    """Matrix of the wrong shape for the requested operation."""


class SingularMatrixError(GordianError):
    """Nonzero determinant required but the matrix is singular."""


class ArgumentError(GordianError):
    """Argument outside the documented domain (e.g. p not an odd prime)."""


class UnknownKnotError(GordianError):
    """Knot name not present in the loaded table."""


class ValidationError(GordianError):
    """Data failed a structural or cross-check invariant.

    Carries the per-record failure details when validating a table.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = list(details or [])


class InapplicableError(GordianError):
    """Obstruction precondition unmet (e.g. non-coprime determinants).

    Distinct from a violated obstruction: the test says nothing here.
    """


class CapExceededError(GordianError):
    """A group enumeration would exceed the configured order cap."""

    def __init__(self, message, order=None, cap=None):
        super().__init__(message)
        self.order = order
        self.cap = cap
