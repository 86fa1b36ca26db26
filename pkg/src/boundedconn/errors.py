"""Exception hierarchy shared by every module of the package."""


class BoundedConnError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(BoundedConnError, ValueError):
    """An argument is outside the operation's domain (k <= 0, s == t, ...)."""


class FieldMismatchError(BoundedConnError, ValueError):
    """Operands belong to fields with different moduli."""


class DimensionError(BoundedConnError, ValueError):
    """Matrix shapes are incompatible for the requested operation."""


class SingularError(BoundedConnError, ArithmeticError):
    """A matrix that had to be inverted is singular.

    ``rank`` is the rank actually found, which helps tell an unlucky random
    draw apart from a structurally singular input.
    """

    def __init__(self, message: str, rank: int):
        super().__init__(message)
        self.rank = rank


class ParseError(BoundedConnError, ValueError):
    """Malformed edge-list input; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EncodingFailure(BoundedConnError, ArithmeticError):
    """A random algebraic encoding was degenerate; retry with fresh randomness."""


class EncodingExhausted(EncodingFailure):
    """Every allowed re-draw of an encoding was degenerate."""
