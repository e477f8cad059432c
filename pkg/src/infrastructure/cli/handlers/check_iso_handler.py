"""
Handler for `check-iso`: randomized verification of the isomorphism identities.
"""
import argparse
import logging
import sys

from pydantic import ValidationError

from domain.entities import RunConfig
from domain.value_objects import parse_dims
from infrastructure.cli.handlers.base import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    emit,
    fail,
    log_handler,
)

logger = logging.getLogger(__name__)


def add_check_iso_parser(subparsers, default_tol: float) -> None:
    parser = subparsers.add_parser("check-iso", help="verify the isomorphism identities on random operators")
    parser.add_argument("--seed", type=int, default=0, help="run seed (64-bit unsigned)")
    parser.add_argument("--trials", type=int, default=20, help="Gaussian operators per dims pair")
    parser.add_argument("--dims", default="20x30", help="operator shapes, e.g. 20x30,50x80")
    parser.add_argument("--tol", type=float, default=default_tol, help="relative rank threshold")
    parser.add_argument("--report", default=None, help="write the JSON report here instead of stdout")
    parser.add_argument("--single-thread", action="store_true", help="run trials inline, in order")
    parser.set_defaults(handler=handle_check_iso)


@log_handler("check-iso")
def handle_check_iso(args: argparse.Namespace, container) -> int:
    ok, dims, err = parse_dims(args.dims)
    if not ok:
        return fail(f"--dims: {err}")
    try:
        run = RunConfig(
            seed=args.seed,
            trials=args.trials,
            dims=dims,
            tol=args.tol,
            report_path=args.report,
            single_thread=args.single_thread,
        )
    except ValidationError as e:
        problem = e.errors()[0]
        return fail(f"--{problem['loc'][0]}: {problem['msg']}")

    result = container.check_iso.execute(run)
    if not result.success:
        return fail(result.error)

    report = result.report
    if result.report_path:
        emit({
            "command": "check-iso",
            "passed": report.passed,
            "failed": [r.name for r in report.failed()],
            "report": result.report_path,
        })
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED
