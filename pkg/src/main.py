"""
Main entry point for the verification harness.

    python src/main.py check-iso --seed 42 --dims 20x30,50x80 --trials 50
    python src/main.py pressure --input force.txt --output pressure.txt --grid 2
    python src/main.py mms --case cosX --n 8,16,32

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage or I/O error.
"""
import argparse
import logging
import sys
from typing import List, Optional

from config import Config, load_config
from domain.exceptions import ConfigError
from presentation import create_container, shutdown_container
from infrastructure.cli.handlers import (
    EXIT_USAGE,
    add_check_iso_parser,
    add_mms_parser,
    add_pressure_parser,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: str, log_file: str = "") -> None:
    """Log to stderr (stdout carries command output), plus a file when configured."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)


def build_parser(default_tol: float = 1e-10) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riesz-iso",
        description="Verification harness for the image/conullspace isomorphism and the pressure equation.",
    )
    parser.add_argument("--config", default=None, help="settings file (KEY=VALUE lines)")
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="overrides LOG_LEVEL from the settings file",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    add_check_iso_parser(subparsers, default_tol)
    add_pressure_parser(subparsers)
    add_mms_parser(subparsers)
    return parser


def _peek_config(argv: List[str]) -> Optional[str]:
    """--config value, needed before the full parser exists (defaults depend on it)."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    return known.config


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command, return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)

    try:
        app_config: Config = load_config(_peek_config(argv))
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    parser = build_parser(app_config.numerics.default_tol)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        configure_logging(args.log_level or app_config.logging.level, app_config.logging.log_file)
    except OSError as e:
        print(f"error: cannot open log file: {e}", file=sys.stderr)
        return EXIT_USAGE
    logger.info(f"Starting {args.command}")

    container = create_container(app_config)
    try:
        return args.handler(args, container)
    finally:
        shutdown_container(container)


if __name__ == "__main__":
    sys.exit(main())
