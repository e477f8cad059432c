"""
JSON report repository implementation.
"""
import logging
from pathlib import Path

from domain.entities import Report
from domain.exceptions import ReportWriteError
from domain.repositories import IReportRepository

logger = logging.getLogger(__name__)


class JsonReportRepository(IReportRepository):
    """Writes reports as UTF-8 JSON. Parent directories must already exist."""

    def save(self, report: Report, path: str) -> str:
        target = Path(path)
        try:
            target.write_text(report.to_json(), encoding="utf-8")
        except OSError as e:
            logger.error(f"Failed to write report to {path}: {e}")
            raise ReportWriteError(f"cannot write report to {path}: {e.strerror or e}") from e
        logger.info(f"Report written to {path} ({len(report.records)} checks, passed={report.passed})")
        return str(target)
