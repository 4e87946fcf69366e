"""rwl-plot: render one figure from a plot spec or an experiment report."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import render
from .spec import PlotSpec, SchemaMismatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rwl-plot", description="Render rwl experiment output")
    parser.add_argument("--spec", type=Path,
                        help="PlotSpec JSON (kind, csv, output, ...)")
    parser.add_argument("--from-report", type=Path, dest="report",
                        help="experiment report.json naming its series")
    parser.add_argument("--out", type=Path,
                        help="output image (required with --from-report)")
    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    try:
        if args.spec is not None:
            spec = PlotSpec.from_file(args.spec)
        elif args.report is not None:
            if args.out is None:
                print("--from-report needs --out", file=sys.stderr)
                sys.exit(2)
            spec = PlotSpec.from_report(args.report, args.out)
        else:
            print("need --spec or --from-report", file=sys.stderr)
            sys.exit(2)
        render(spec)
    except SchemaMismatch as exc:
        print(f"schema mismatch: {exc}", file=sys.stderr)
        sys.exit(2)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        sys.exit(1)
    print(spec.output)
    sys.exit(0)


if __name__ == "__main__":
    main()
