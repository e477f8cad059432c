"""
Exception hierarchy for the numerical core and its command-line surface.
Input problems subclass ValueError, the way the value-object parsers report them.
"""
from typing import Optional


class NumericsError(Exception):
    """Base class for errors raised by the numerical core."""


class InvalidInputError(NumericsError, ValueError):
    """Non-finite entries, wrong shapes or out-of-range parameters."""


class ComplexScalarError(InvalidInputError):
    """Complex data passed where only real scalars make the isomorphism linear."""


class DimensionMismatchError(InvalidInputError):
    """Vector or functional dimension does not fit the operator."""


class InvalidGridError(InvalidInputError):
    """Grid with non-positive spacing or fewer than two cells."""


class NotInImageError(NumericsError):
    """Vector lies outside Im(A) by more than the tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NotInConullspaceError(NumericsError):
    """Functional does not vanish on N(A): there is no preimage in Im(A)."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class RankZeroError(NumericsError):
    """Operation needs a nonzero singular value."""


class SolverError(NumericsError):
    """Iterative solver stopped before reaching its tolerance."""

    def __init__(self, message: str, iterations: Optional[int] = None):
        super().__init__(message)
        self.iterations = iterations


class ConfigError(ValueError):
    """Invalid run configuration or settings file."""


class FieldFormatError(ValueError):
    """Malformed field file. `line` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


class ReportWriteError(OSError):
    """Report could not be written to the requested path."""
