import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from .config import settings
from .controllers.command_controller import EXIT_INPUT_ERROR, CommandController, error_report, render_report
from .core.exceptions import CutsetRegionException
from .models.base import ErrorReport
from .models.problem import CommandFlags
from .utils.problem_parser import parse_problem

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutset-region",
        description="Generalized cut-set outer bounds for multiterminal networks",
    )
    parser.add_argument("command", choices=CommandController.COMMANDS, help="Command to run")
    parser.add_argument("spec_file", nargs="?", help="Problem spec file (optional for 'props')")
    parser.add_argument("--grid", type=int, default=None, help="Override the permissible-set grid resolution")
    parser.add_argument("--seed", type=int, default=0, help="Seed for randomized checks (default: 0)")
    parser.add_argument("--out", default=None, help="Write the region JSON to this file")
    parser.add_argument(
        "--deterministic-recs",
        action="store_true",
        help="Search deterministic reconstructions only",
    )
    parser.add_argument("--cases", type=int, default=100, help="Random cases per property suite (default: 100)")
    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, run the command, print its JSON report and return the exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        flags = CommandFlags(
            grid=args.grid,
            seed=args.seed,
            out=args.out,
            deterministic_recs=args.deterministic_recs,
            cases=args.cases,
        )
    except ValidationError as e:
        first = e.errors()[0]
        report = ErrorReport(
            message=f"Invalid --{str(first['loc'][0]).replace('_', '-')}: {first['msg']}",
            error_code="INVALID_FLAG",
        )
        print(render_report(report))
        return EXIT_INPUT_ERROR

    spec = None
    if args.spec_file is not None and args.command != "props":
        try:
            spec = parse_problem(Path(args.spec_file).read_text(encoding="utf-8"))
        except OSError as e:
            logger.error(f"Cannot read {args.spec_file}: {e}")
            report = ErrorReport(
                message=f"Cannot read spec file: {e.strerror}",
                error_code="SPEC_FILE_UNREADABLE",
                details={"path": args.spec_file},
            )
            print(render_report(report))
            return EXIT_INPUT_ERROR
        except CutsetRegionException as e:
            logger.error(f"Invalid spec file {args.spec_file}: {e.message}")
            print(render_report(error_report(e)))
            return EXIT_INPUT_ERROR

    code, report = CommandController().run_command(spec, args.command, flags)
    print(render_report(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
