#!/usr/bin/env python3
"""
expansive - fixed points of expansive mappings on (ordered) metric spaces

Subcommands: check | solve | gallery | falsify
Exit status: 0 success, 1 mathematical failure, 2 usage or spec error
"""
import argparse
import sys
from typing import List, Optional

from src.core.config import ToolkitConfig
from src.core.errors import ExpansiveError, SpecParseError, UnknownGalleryItem
from src.core.validators import ValidationError
from src.services.runner import EXIT_FAILURE, EXIT_USAGE

from src.commands.check import register_check_command
from src.commands.solve import register_solve_command
from src.commands.gallery import register_gallery_command
from src.commands.falsify import register_falsify_command


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expansive",
        description="Check hypotheses and compute fixed points of expansive mappings",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {ToolkitConfig.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    register_check_command(subparsers)
    register_solve_command(subparsers)
    register_gallery_command(subparsers)
    register_falsify_command(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    ToolkitConfig.configure_logging()
    args = build_parser().parse_args(argv)

    try:
        return args.handler(args)
    except (SpecParseError, ValidationError, UnknownGalleryItem) as e:
        print(f"⛔ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ExpansiveError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
