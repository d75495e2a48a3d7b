import argparse

from src.commands import add_output_arguments, add_override_arguments, add_source_arguments, emit, load_problem
from src.services.runner import cmd_check


def handle_check(args: argparse.Namespace) -> int:
    return emit(cmd_check(load_problem(args)), args)


def register_check_command(subparsers) -> None:
    """✅ check - verify every hypothesis of the selected theorem"""
    parser = subparsers.add_parser("check", help="verify the hypotheses of the selected theorem")
    add_source_arguments(parser)
    add_override_arguments(parser)
    add_output_arguments(parser)
    parser.set_defaults(handler=handle_check)
