#!/usr/bin/env python3
"""Emit per-index required-degree CSV data for a pattern's bound lines.

One column per requested line: the almost-perfect line (optionally with an
eta slack) plus any number of proportional lines for x-values given as
fractions.  Columns hold ceil(required degree) for a host on n vertices,
sloped up to each line's cutoff index and flat beyond it — ready to plot
with any external tool (rendering is out of scope here).
"""

from __future__ import annotations

import argparse
import sys

from tilekit.harness import emit_boundline_plot_data, pattern_by_name
from tilekit.thresholds import chromatic_data, komlos_line, parse_rational, x_line


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("pattern", help="pattern name, e.g. C5, K3, K_{2,4,6}")
    parser.add_argument("--n", type=int, default=100, help="host order")
    parser.add_argument("--eta", default="0", help="slack on the komlos line")
    parser.add_argument(
        "--x",
        action="append",
        default=[],
        metavar="FRAC",
        help="add a proportional line for this x (repeatable)",
    )
    parser.add_argument("--out", help="write CSV here instead of stdout")
    args = parser.parse_args(argv)

    params = chromatic_data(pattern_by_name(args.pattern))
    lines = [komlos_line(params, eta=parse_rational(args.eta))]
    labels = ["komlos"]
    for raw in args.x:
        x = parse_rational(raw)
        lines.append(x_line(params, x))
        labels.append(f"x={x}")
    text = emit_boundline_plot_data(lines, args.n, labels)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
