"""Repository implementations package."""
from infrastructure.repositories.json_report_repository import JsonReportRepository

__all__ = [
    "JsonReportRepository",
]
