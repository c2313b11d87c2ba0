#!/usr/bin/env python3
"""Run the extremal-construction verification suites at desk scale.

Three families, each checking the mechanism that makes its construction
tight:

  ex1  staircase host: every optimal bottle tiling misses a designated
       independent set C (checked by an oracle that maximises overlap
       with C among all optimal tilings);
  ex2  degree-dip host: no pattern copy meets the low-degree set V'
       (checked by exhaustive copy enumeration);
  ex3  bottleneck host: the maximum tiling covers fewer than (x - eta) n
       vertices (checked by the exact solver).

Grid points default to the canonical desk-scale instances; pass --grid to
run a custom JSON list of parameter dicts for one family.  Exit status:
0 all records pass, 1 any record fails, 2 any record inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from tilekit.solver import DEFAULT_BUDGET
from tilekit.harness import verify_extremal_suite

DEFAULT_GRIDS = {
    "ex1": [{"r": 2, "sigma": 1, "omega": 2, "n": 15, "eta": "1/15", "k": 2}],
    "ex2": [{"pattern": "C5", "n": 40, "eta": "1/20"}],
    "ex3": [{"pattern": "K3", "n": 18, "x": "1/3", "eta": "1/18"}],
}
EXIT = {"pass": 0, "fail": 1, "inconclusive": 2}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--family",
        choices=sorted(DEFAULT_GRIDS) + ["all"],
        default="all",
        help="which construction family to verify (default: all)",
    )
    parser.add_argument("--grid", help="JSON file with a list of parameter dicts")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)

    if args.grid and args.family == "all":
        parser.error("--grid needs a single --family")
    families = sorted(DEFAULT_GRIDS) if args.family == "all" else [args.family]

    worst = 0
    payload = []
    for family in families:
        if args.grid:
            with open(args.grid) as fh:
                grid = json.load(fh)
        else:
            grid = DEFAULT_GRIDS[family]
        report = verify_extremal_suite(family, grid, budget=args.budget)
        payload.append(report.to_dict())
        worst = max(worst, EXIT[report.verdict])
        if not args.json:
            print(f"{report.experiment}: {report.verdict}")
            for rec in report.records:
                print(f"  [{rec.verdict:>12}] {rec.label}  {rec.to_dict()['details']}")
    if args.json:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
