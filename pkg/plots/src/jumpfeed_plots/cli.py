"""CLI: render simulator CSVs to PNG.

Exit codes: 0 success, 1 usage error, 2 bad input data or I/O failure.
"""
from __future__ import annotations

import argparse
import sys

from .io import EmptyInput, SchemaMismatch
from .render import FIGURE_IDS, PlotJob, render


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="jumpfeed-plot", description=__doc__.splitlines()[0])
    parser.add_argument("inputs", nargs="+", help="input CSV file(s)")
    parser.add_argument("--figure", required=True, choices=list(FIGURE_IDS))
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument(
        "--label", action="append", default=None,
        help="curve label, one per input (repeatable)",
    )
    parser.add_argument("--title", default=None)
    parser.add_argument(
        "--bloch-3d", action="store_true",
        help="add a 3D panel to the fig3 Bloch track",
    )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        job = PlotJob(
            inputs=tuple(args.inputs),
            figure_id=args.figure,
            output=args.out,
            labels=tuple(args.label) if args.label else None,
            title=args.title,
            bloch_3d=args.bloch_3d,
        )
        path = render(job)
        print(path)
        return 0
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    except ValueError as exc:
        # PlotJob validation problems are usage errors unless they are
        # schema/data complaints from the readers
        if isinstance(exc, (SchemaMismatch, EmptyInput)):
            print(f"input error: {exc}", file=sys.stderr)
            return 2
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
