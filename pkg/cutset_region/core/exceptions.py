"""Custom exceptions for the cutset-region toolkit."""

from typing import Any


class CutsetRegionException(Exception):
    """Base exception for the toolkit."""

    def __init__(self, message: str, error_code: str | None = None, details: dict[str, Any] | None = None):
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)


class UnknownVariableError(CutsetRegionException):
    """Raised when a variable name is not part of a joint or channel."""

    def __init__(
        self,
        message: str = "Unknown variable",
        error_code: str = "UNKNOWN_VARIABLE",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class VariableCollisionError(CutsetRegionException):
    """Raised when a channel output reuses a name already present in the joint."""

    def __init__(
        self,
        message: str = "Variable name collision",
        error_code: str = "VARIABLE_COLLISION",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class OverlappingVariablesError(CutsetRegionException):
    """Raised when the argument sets of a mutual-information term intersect."""

    def __init__(
        self,
        message: str = "Variable sets overlap",
        error_code: str = "OVERLAPPING_VARIABLES",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class DimensionMismatchError(CutsetRegionException):
    """Raised when alphabet sizes, party counts or vector lengths disagree."""

    def __init__(
        self,
        message: str = "Dimension mismatch",
        error_code: str = "DIMENSION_MISMATCH",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class NormalizationError(CutsetRegionException):
    """Raised when a pmf or a channel row is negative or does not sum to one."""

    def __init__(
        self,
        message: str = "Table is not normalized",
        error_code: str = "NOT_NORMALIZED",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class TableSizeExceededError(CutsetRegionException):
    """Raised when a dense table would exceed the configured entry cap."""

    def __init__(
        self,
        message: str = "Table size cap exceeded",
        error_code: str = "TABLE_SIZE_EXCEEDED",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class EnumerationCapExceededError(CutsetRegionException):
    """Raised when a grid or a reconstruction search is larger than allowed."""

    def __init__(
        self,
        message: str = "Enumeration cap exceeded",
        error_code: str = "ENUMERATION_CAP_EXCEEDED",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class InvalidParameterError(CutsetRegionException):
    """Raised for out-of-range scalar parameters (negative scale, bad cut index, ...)."""

    def __init__(
        self,
        message: str = "Invalid parameter",
        error_code: str = "INVALID_PARAMETER",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class RegionKindMismatchError(CutsetRegionException):
    """Raised when a convexified region is combined with a non-convexified one."""

    def __init__(
        self,
        message: str = "Regions must be both convexified or both not",
        error_code: str = "REGION_KIND_MISMATCH",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class SolverError(CutsetRegionException):
    """Raised when the simplex solver fails to terminate."""

    def __init__(
        self,
        message: str = "Linear feasibility solver failed",
        error_code: str = "SOLVER_ERROR",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class DistortionPreconditionError(CutsetRegionException):
    """Raised when a candidate reconstruction misses its distortion targets."""

    def __init__(
        self,
        message: str = "Distortion precondition violated",
        error_code: str = "INVALID_CANDIDATE",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class ProblemSpecSyntaxError(CutsetRegionException):
    """Raised when a problem file cannot be parsed; carries the position."""

    def __init__(
        self,
        message: str = "Problem spec syntax error",
        line: int | None = None,
        column: int | None = None,
        error_code: str = "SPEC_SYNTAX_ERROR",
        details: dict[str, Any] | None = None,
    ):
        self.line = line
        self.column = column
        details = dict(details or {})
        if line is not None:
            details["line"] = line
        if column is not None:
            details["column"] = column
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message, error_code, details)


class InvariantViolationError(CutsetRegionException):
    """Raised when a parsed object breaks a domain invariant."""

    def __init__(
        self,
        message: str = "Invariant violated",
        error_code: str = "INVARIANT_VIOLATION",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class MissingSectionError(CutsetRegionException):
    """Raised when a command needs a spec section that is absent."""

    def __init__(
        self,
        message: str = "Required spec section is missing",
        error_code: str = "MISSING_SECTION",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)


class UnknownCommandError(CutsetRegionException):
    """Raised for a command name the CLI does not know."""

    def __init__(
        self,
        message: str = "Unknown command",
        error_code: str = "UNKNOWN_COMMAND",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message, error_code, details)
