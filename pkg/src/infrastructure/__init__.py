"""Infrastructure layer package."""
from infrastructure.repositories import JsonReportRepository
from infrastructure.adapters import FieldFileAdapter
from infrastructure.scheduler import TrialExecutor

__all__ = [
    # Repositories
    "JsonReportRepository",
    # Adapters
    "FieldFileAdapter",
    # Scheduler
    "TrialExecutor",
]
