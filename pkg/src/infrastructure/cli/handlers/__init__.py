"""Command-line handlers package."""
from infrastructure.cli.handlers.base import (
    EXIT_OK,
    EXIT_CHECK_FAILED,
    EXIT_USAGE,
    log_handler,
)
from infrastructure.cli.handlers.check_iso_handler import add_check_iso_parser, handle_check_iso
from infrastructure.cli.handlers.pressure_handler import add_pressure_parser, handle_pressure
from infrastructure.cli.handlers.mms_handler import add_mms_parser, handle_mms

__all__ = [
    "EXIT_OK",
    "EXIT_CHECK_FAILED",
    "EXIT_USAGE",
    "log_handler",
    "add_check_iso_parser",
    "handle_check_iso",
    "add_pressure_parser",
    "handle_pressure",
    "add_mms_parser",
    "handle_mms",
]
