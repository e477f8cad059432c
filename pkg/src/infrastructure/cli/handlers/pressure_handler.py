"""
Handler for `pressure`: recover a zero-mean pressure from a force-field file.
"""
import argparse
import logging

from domain.entities import SolverPath
from domain.exceptions import ConfigError
from infrastructure.cli.handlers.base import EXIT_OK, emit, fail, log_handler, parse_grid

logger = logging.getLogger(__name__)


def add_pressure_parser(subparsers) -> None:
    parser = subparsers.add_parser("pressure", help="recover pressure from a gradient force field")
    parser.add_argument("--input", required=True, help="vector field file holding the force G")
    parser.add_argument("--output", required=True, help="scalar field file to write p to")
    parser.add_argument("--grid", default=None, help="expected cells NX,NY,NZ")
    parser.add_argument("--len", dest="lengths", default=None, help="expected lengths LX,LY,LZ")
    parser.add_argument(
        "--solver",
        choices=[p.value for p in SolverPath],
        default=SolverPath.AUTO.value,
        help="dense (SVD), cg, or auto by grid size",
    )
    parser.set_defaults(handler=handle_pressure)


@log_handler("pressure")
def handle_pressure(args: argparse.Namespace, container) -> int:
    try:
        grid = parse_grid(args.grid, args.lengths)
    except (ConfigError, ValueError) as e:
        return fail(str(e))

    result = container.recover_pressure.execute(
        input_path=args.input,
        output_path=args.output,
        grid=grid,
        solver=SolverPath(args.solver),
    )
    if not result.success:
        return fail(result.error)
    emit(result.summary())
    return EXIT_OK
