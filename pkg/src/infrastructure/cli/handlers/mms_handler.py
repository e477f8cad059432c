"""
Handler for `mms`: convergence of pressure recovery on manufactured solutions.
"""
import argparse
import logging
import sys

from domain.entities import ManufacturedCase, SolverPath
from domain.exceptions import ConfigError
from domain.value_objects import parse_int_list
from infrastructure.cli.handlers.base import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    emit,
    fail,
    log_handler,
    parse_lengths,
)

logger = logging.getLogger(__name__)


def add_mms_parser(subparsers) -> None:
    parser = subparsers.add_parser("mms", help="manufactured-solution convergence table")
    parser.add_argument(
        "--case",
        choices=[c.value for c in ManufacturedCase],
        default=ManufacturedCase.COS_X.value,
    )
    parser.add_argument("--n", dest="n_list", default="8,16,32", help="mesh sizes, strictly increasing, each >= 4")
    parser.add_argument("--len", dest="lengths", default=None, help="domain lengths LX,LY,LZ")
    parser.add_argument("--report", default=None, help="write the JSON report here instead of stdout")
    parser.add_argument(
        "--solver",
        choices=[p.value for p in SolverPath],
        default=SolverPath.AUTO.value,
    )
    parser.set_defaults(handler=handle_mms)


@log_handler("mms")
def handle_mms(args: argparse.Namespace, container) -> int:
    ok, n_list, err = parse_int_list(args.n_list)
    if not ok:
        return fail(f"--n: {err}")
    try:
        lengths = parse_lengths(args.lengths)
    except ConfigError as e:
        return fail(str(e))

    result = container.mms_convergence.execute(
        case=ManufacturedCase(args.case),
        n_list=n_list,
        lengths=lengths,
        solver=SolverPath(args.solver),
        report_path=args.report,
    )
    if not result.success:
        return fail(result.error)

    report = result.report
    if result.report_path:
        emit({
            "command": "mms",
            "case": args.case,
            "passed": report.passed,
            "orders": report.mms.orders,
            "report": result.report_path,
        })
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED
