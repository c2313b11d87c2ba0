#!/usr/bin/env python3
"""Reproduce the reference coefficient table for the degree bound lines.

For each pattern in the default list the script computes the start
coefficient (bound on the smallest degree), the end coefficient (value at
the cutoff index), and the per-index slope of the almost-perfect-tiling
bound line, all as exact rationals, and compares them cell by cell against
the hard-coded reference values.  Star patterns have no start cell: their
smallest degree is bounded by an absolute constant, not a fraction of n.

Exit status 0 iff every compared cell matches.
"""

from __future__ import annotations

import argparse
import json
import sys

from tilekit.harness import run_figure2
from tilekit.thresholds import format_rational


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit the table as JSON")
    parser.add_argument("--out", help="write output to this file instead of stdout")
    args = parser.parse_args(argv)

    table = run_figure2()
    if args.json:
        text = json.dumps(table.to_dict(), indent=2) + "\n"
    else:
        rows = [("pattern", "start", "end", "slope", "")]
        for row in table.rows:
            rows.append(
                (
                    row.name,
                    format_rational(row.start),
                    format_rational(row.end),
                    format_rational(row.slope),
                    "ok" if row.matches else "MISMATCH",
                )
            )
        widths = [max(len(r[c]) for r in rows) for c in range(5)]
        text = "\n".join(
            "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
            for r in rows
        )
        text += f"\nall_match: {table.all_match}\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if table.all_match else 1


if __name__ == "__main__":
    raise SystemExit(main())
