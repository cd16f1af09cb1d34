"""Command line: one entry point per figure plus an `all` driver.

    udw-plots fig2 --csv data/fig2.csv --out figures/fig2
    udw-plots all --data data/ --out figures/

Exit codes: 0 success, 1 schema or validation error (message names the
offending column or property), 5 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .csv_io import SchemaError
from .figures import FIGURE_IDS, ValidationError, render


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="udw-plots",
        description="Render detector-response figure datasets (CSV) to SVG + PNG.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for fig_id in FIGURE_IDS:
        one = sub.add_parser(fig_id, help=f"render {fig_id} from its CSV")
        one.add_argument("--csv", required=True, help="input dataset")
        one.add_argument("--out", required=True,
                         help="output image stem (writes <stem>.svg and <stem>.png)")
    everything = sub.add_parser("all", help="render every figure from a data directory")
    everything.add_argument("--data", required=True,
                            help="directory holding fig1.csv .. fig5.csv")
    everything.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "all":
            os.makedirs(args.out, exist_ok=True)
            written = []
            for fig_id in FIGURE_IDS:
                csv_in = os.path.join(args.data, f"{fig_id}.csv")
                written += render(fig_id, csv_in, os.path.join(args.out, fig_id))
            for path in written:
                print(path)
        else:
            out_dir = os.path.dirname(args.out)
            if out_dir:
                os.makedirs(out_dir, exist_ok=True)
            for path in render(args.command, args.csv, args.out):
                print(path)
        return 0
    except (SchemaError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
