#!/usr/bin/env python3
"""Write a synthetic registry feed (one JSON document per line).

The feed mimics replication output: per-package version manifests plus a
time map, with drifting dependency sets and the occasional backport, so
the full ingest -> build -> detect pipeline can be exercised offline.
"""

import argparse

from declinewatch.months import Month
from declinewatch.synth import synthetic_feed


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="NDJSON file to write")
    parser.add_argument("--packages", type=int, default=200)
    parser.add_argument("--months", type=int, default=24)
    parser.add_argument("--start", type=Month.parse, default=Month(2015, 1), metavar="YYYY-MM")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    lines = synthetic_feed(
        n_packages=args.packages, n_months=args.months, start=args.start, seed=args.seed
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
    print(f"wrote {len(lines)} documents to {args.out}")


if __name__ == "__main__":
    main()
