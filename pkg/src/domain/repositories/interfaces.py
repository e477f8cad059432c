"""
Repository interfaces for the domain layer.
Field files and reports are read and written through these abstractions.
"""
from abc import ABC, abstractmethod
from typing import Optional, Union

from domain.entities import Grid, Report, ScalarField, VectorField


class IFieldRepository(ABC):
    """Interface for field file access."""

    @abstractmethod
    def load(self, path: str, expected_grid: Optional[Grid] = None) -> Union[ScalarField, VectorField]:
        """Parse a field file, optionally checking its grid."""
        pass

    @abstractmethod
    def save(self, path: str, field: Union[ScalarField, VectorField]) -> None:
        """Write a field file."""
        pass


class IReportRepository(ABC):
    """Interface for report storage."""

    @abstractmethod
    def save(self, report: Report, path: str) -> str:
        """Write a report, returning the path written."""
        pass
