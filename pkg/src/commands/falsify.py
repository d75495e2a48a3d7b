import argparse

from src.commands import add_output_arguments, add_override_arguments, add_source_arguments, emit, load_problem
from src.core.config import ToolkitConfig
from src.services.checkers import CONDITIONS
from src.services.runner import cmd_falsify


def handle_falsify(args: argparse.Namespace) -> int:
    return emit(cmd_falsify(load_problem(args), args.condition, args.budget), args)


def register_falsify_command(subparsers) -> None:
    """🔍 falsify - search for a violation with escalating density"""
    parser = subparsers.add_parser("falsify", help="search for a counterexample to one condition")
    add_source_arguments(parser)
    add_override_arguments(parser)
    add_output_arguments(parser)
    parser.add_argument("--condition", choices=CONDITIONS, default="phi", help="condition to attack")
    parser.add_argument("--budget", type=int, default=ToolkitConfig.SAMPLE_BUDGET,
                        help="pairs per stage (sampled spaces: in total)")
    parser.set_defaults(handler=handle_falsify)
