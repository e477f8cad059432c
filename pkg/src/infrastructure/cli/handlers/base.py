"""
Base handler utilities and decorators for the command line.
"""
import argparse
import json
import logging
import sys
from functools import wraps
from typing import Callable, Optional, Tuple

from domain.entities import Grid
from domain.exceptions import ConfigError
from domain.value_objects import parse_float_triple, parse_int_triple

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def log_handler(handler_name: str):
    """
    Decorator to log handler calls.
    Any exception escaping the handler is logged and becomes exit code 2.
    """
    def decorator(func: Callable[..., int]):
        @wraps(func)
        def wrapper(args: argparse.Namespace, *rest, **kwargs) -> int:
            logger.info(f"Handler {handler_name} called")
            try:
                code = func(args, *rest, **kwargs)
            except Exception as e:
                logger.error(f"Error in handler {handler_name}: {e}", exc_info=True)
                print(f"error: {e}", file=sys.stderr)
                return EXIT_USAGE
            logger.info(f"Handler {handler_name} finished with exit code {code}")
            return code
        return wrapper
    return decorator


def fail(message: str) -> int:
    """Report a usage or I/O problem on stderr."""
    logger.error(message)
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def emit(payload: dict) -> None:
    """Print a one-line JSON summary on stdout."""
    print(json.dumps(payload, sort_keys=True))


def parse_lengths(text: Optional[str]) -> Tuple[float, float, float]:
    """
    Raises:
        ConfigError: malformed --len value
    """
    if text is None:
        return (1.0, 1.0, 1.0)
    ok, lengths, err = parse_float_triple(text)
    if not ok:
        raise ConfigError(f"--len: {err}")
    return lengths


def parse_grid(grid_text: Optional[str], len_text: Optional[str]) -> Optional[Grid]:
    """
    Grid from --grid and --len, or None when --grid is absent.

    Raises:
        ConfigError: malformed flag values
    """
    if grid_text is None:
        return None
    ok, counts, err = parse_int_triple(grid_text)
    if not ok:
        raise ConfigError(f"--grid: {err}")
    return Grid.create(counts, parse_lengths(len_text))
