#!/usr/bin/env python3
"""Seeded randomized sweeps pitting the solver against ground truth.

Two suites:

  solver-oracle      branch-and-bound max_tiling vs. the exhaustive
                     assignment oracle on random hosts (patterns rotate
                     through K2, K3, K_{1,2}, C5);
  hajnal-szemeredi   hosts with minimum degree >= (1 - 1/r) n and r | n
                     must admit perfect K_r-tilings, r in {2, 3}.

Per-record lines show the instance label and verdict; the summary line
gives the merged verdict.  Exit status: 0 pass, 1 fail, 2 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from tilekit.harness import hajnal_szemeredi_suite, solver_oracle_sweep

EXIT = {"pass": 0, "fail": 1, "inconclusive": 2}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--suite",
        choices=["solver-oracle", "hajnal-szemeredi"],
        default="solver-oracle",
    )
    parser.add_argument("--count", type=int, default=50, help="instances to run")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--max-n", type=int, default=14, help="largest host (solver-oracle only)"
    )
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--quiet", action="store_true", help="summary line only")
    args = parser.parse_args(argv)

    if args.suite == "solver-oracle":
        report = solver_oracle_sweep(args.count, seed=args.seed, max_n=args.max_n)
    else:
        report = hajnal_szemeredi_suite(args.count, seed=args.seed)

    if args.json:
        json.dump(report.to_dict(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        if not args.quiet:
            for rec in report.records:
                print(f"  [{rec.verdict:>12}] {rec.label}  {rec.to_dict()['details']}")
        counts = {v: 0 for v in EXIT}
        for rec in report.records:
            counts[rec.verdict] += 1
        print(
            f"{report.experiment}: {report.verdict} "
            f"({counts['pass']} pass, {counts['fail']} fail, "
            f"{counts['inconclusive']} inconclusive)"
        )
    return EXIT[report.verdict]


if __name__ == "__main__":
    raise SystemExit(main())
