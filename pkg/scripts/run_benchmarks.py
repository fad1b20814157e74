#!/usr/bin/env python3
"""Benchmark grid driver: query/operation counts per family, degree, algorithm.

Writes the CSV artifact (family,n,d,algorithm,queries,mults,adds,
staircase_size,dmax,wall_ms) or, with --gnuplot COLUMN, blank-line-separated
(d, COLUMN) blocks ready for `plot ... index k`. --check diffs measured query
counts against the shipped reference tables and fails on any mismatch.
"""

from __future__ import annotations

import argparse
import sys

from seqrel.compare import (
    ALGORITHMS,
    FAMILY_NAMES,
    FamilySpec,
    bench,
    gnuplot_columns,
    rows_to_csv,
)
from seqrel.fixtures import reference_queries


def parse_degree_range(text: str) -> range:
    lo, _, hi = text.partition("..")
    return range(int(lo), int(hi or lo) + 1)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--family", choices=FAMILY_NAMES, action="append",
        help="repeatable; default: all three",
    )
    ap.add_argument("-n", type=int, choices=(2, 3), default=2)
    ap.add_argument("-d", default="2..10", help='degree grid, e.g. "2..10" or "4"')
    ap.add_argument("--algos", default="bms,sfglm", help=f"subset of {','.join(ALGORITHMS)}")
    ap.add_argument("--out", help="CSV path (default: stdout)")
    ap.add_argument(
        "--gnuplot", metavar="COLUMN",
        help="emit (d, COLUMN) series blocks instead of CSV, e.g. queries or mults",
    )
    ap.add_argument(
        "--check", action="store_true",
        help="diff measured query counts against the reference tables",
    )
    args = ap.parse_args(argv)

    families = args.family or list(FAMILY_NAMES)
    algos = args.algos.split(",")
    specs = [
        FamilySpec(family, d, args.n)
        for family in families
        for d in parse_degree_range(args.d)
    ]
    rows = bench(specs, algos, output_path=None if args.gnuplot else args.out)

    if args.gnuplot:
        text = gnuplot_columns(rows, args.gnuplot)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    elif args.out is None:
        sys.stdout.write(rows_to_csv(rows))

    if args.check:
        reference = reference_queries(args.n)
        mismatches = 0
        missing = 0
        for row in rows:
            expected = reference.get((row.family, row.algorithm), {}).get(row.d)
            if expected is None:
                missing += 1
                continue
            if row.queries != expected:
                mismatches += 1
                print(
                    f"MISMATCH {row.family} n={row.n} d={row.d} {row.algorithm}: "
                    f"measured {row.queries}, reference {expected}",
                    file=sys.stderr,
                )
        checked = len(rows) - missing
        print(
            f"check: {checked} points against reference, {mismatches} mismatches"
            + (f", {missing} without reference data" if missing else ""),
            file=sys.stderr,
        )
        if mismatches:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
