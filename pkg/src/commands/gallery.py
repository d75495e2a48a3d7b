import argparse

from src.commands import add_output_arguments, emit
from src.core.errors import UnknownGalleryItem
from src.services.gallery import GALLERY, cmd_gallery


def handle_gallery(args: argparse.Namespace) -> int:
    if args.list:
        for item in GALLERY.values():
            print(f"📚 {item.name:<14} {item.description}")
        return 0
    if not args.name:
        raise UnknownGalleryItem("a gallery item name is required (or --list)")
    return emit(cmd_gallery(args.name), args)


def register_gallery_command(subparsers) -> None:
    """📚 gallery - built-in reproductions with expected outcomes"""
    parser = subparsers.add_parser("gallery", help="run a built-in reproduction")
    parser.add_argument("name", nargs="?", help="gallery item")
    parser.add_argument("--list", action="store_true", help="list gallery items")
    add_output_arguments(parser)
    parser.set_defaults(handler=handle_gallery)
