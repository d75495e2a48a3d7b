"""
Argument groups and output handling shared by every subcommand
"""
import argparse
import sys

from src.services.gallery import gallery_names, gallery_spec
from src.services.problem import THEOREMS, ProblemSpec, load_spec
from src.services.runner import RunReport, format_run_report, write_outputs


def add_source_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", metavar="FILE", help="problem spec (JSON)")
    source.add_argument("--gallery", metavar="NAME", help=f"built-in problem: {', '.join(gallery_names())}")


def add_override_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theorem", choices=THEOREMS, help="which theorem's hypotheses and iteration to use")
    parser.add_argument("--eta", type=float, help="exponent η > 1")
    parser.add_argument("--x0", help="starting point (number, fraction like 1/5, or label)")
    parser.add_argument("--seed", type=int, help="seed for sampled checks")
    parser.add_argument("--tol", type=float, help="solver tolerance")
    parser.add_argument("--max-iter", dest="max_iter", type=int, help="solver iteration cap")


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("--out", metavar="DIR", help="write report.json and trace files here")


def load_problem(args: argparse.Namespace) -> ProblemSpec:
    """Spec from --spec or --gallery, with command-line overrides applied"""
    spec = load_spec(args.spec) if args.spec else gallery_spec(args.gallery)
    return spec.with_overrides(
        theorem=args.theorem,
        eta=args.eta,
        x0=args.x0,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
    )


def emit(report: RunReport, args: argparse.Namespace) -> int:
    """Print the report, write --out files, and return the exit status"""
    if getattr(args, "json", False):
        print(report.to_json())
    else:
        print(format_run_report(report))

    out = getattr(args, "out", None)
    if out:
        for path in write_outputs(report, out):
            print(f"📄 {path}", file=sys.stderr)
    return report.exit_code
