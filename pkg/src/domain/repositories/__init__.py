"""Repository interfaces package."""
from domain.repositories.interfaces import (
    IFieldRepository,
    IReportRepository,
)

__all__ = [
    "IFieldRepository",
    "IReportRepository",
]
