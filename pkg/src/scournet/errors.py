"""Exception types shared across the library.

The CLI maps these onto exit codes: validation/config problems exit 1,
I/O problems exit 2 (plain OSError), numerical failures exit 3.
"""


class ScourNetError(Exception):
    """Base class for all library-specific errors."""


class ShapeError(ScourNetError, ValueError):
    """Operands have incompatible shapes; the message names both shapes."""


class DomainError(ScourNetError, ValueError):
    """An argument is outside the range an operation is defined on."""


class SchemaError(ScourNetError, ValueError):
    """A data or model file does not match the expected layout."""


class ParseError(ScourNetError, ValueError):
    """A cell could not be parsed as a number; names row and column."""


class ValidationError(ScourNetError, ValueError):
    """Values violate a documented invariant; lists the offending rows."""


class ConfigError(ScourNetError, ValueError):
    """A training or network configuration is inconsistent."""


class UndefinedCorrelationError(ScourNetError, ValueError):
    """Correlation requested for a constant vector (zero variance)."""


class NumericError(ScourNetError, ArithmeticError):
    """A non-finite value reached a numerical routine."""


class DivergenceError(NumericError):
    """Training produced a non-finite loss; names epoch and batch."""
