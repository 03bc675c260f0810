"""Exception types raised across the package."""


class ClassRegError(Exception):
    """Base class for every error raised by classreg."""


class NonFiniteInput(ClassRegError, ValueError):
    pass


class DimensionMismatch(ClassRegError, ValueError):
    pass


class NotPositiveDefinite(ClassRegError, ArithmeticError):
    """A Cholesky pivot fell below the positive-definiteness tolerance."""

    def __init__(self, message: str, pivot_index: int = -1):
        super().__init__(message)
        self.pivot_index = pivot_index


class RankDeficient(ClassRegError, ArithmeticError):
    """The design matrix has linearly dependent columns."""


class NonPositiveGamma(ClassRegError, ValueError):
    pass


class DegreeZero(ClassRegError, ValueError):
    pass


class OutOfRange(ClassRegError, ValueError):
    pass


class NegativeFeature(ClassRegError, ValueError):
    pass


class BracketInvalid(ClassRegError):
    """The discrepancy target is not enclosed by the gamma bracket."""


class DegenerateIterate(ClassRegError):
    pass


class ParseError(ClassRegError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MissingColumn(ClassRegError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class EmptyGrid(ClassRegError, ValueError):
    pass


class DegenerateLine(UserWarning):
    """Linear decision boundary is vertical (or absent) in the x/y plane."""
