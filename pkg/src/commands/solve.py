import argparse

from src.commands import add_output_arguments, add_override_arguments, add_source_arguments, emit, load_problem
from src.services.runner import cmd_solve


def handle_solve(args: argparse.Namespace) -> int:
    return emit(cmd_solve(load_problem(args), strict=args.strict), args)


def register_solve_command(subparsers) -> None:
    """🔁 solve - run the theorem's iteration and report the trace"""
    parser = subparsers.add_parser("solve", help="compute a fixed point with the theorem's iteration")
    add_source_arguments(parser)
    add_override_arguments(parser)
    add_output_arguments(parser)
    parser.add_argument("--strict", action="store_true", help="refuse to iterate when a hypothesis check fails")
    parser.set_defaults(handler=handle_solve)
