#!/usr/bin/env python3
"""End-to-end demo on a synthetic feed.

Generates a feed, ingests it into an event log, builds the monthly
ranking store, prints the decline statuses for the final month, and
leaves everything under --workdir so `declinewatch serve` can be pointed
at the store afterwards.
"""

import argparse
from pathlib import Path

from declinewatch.cli import run
from declinewatch.months import Month
from declinewatch.synth import synthetic_feed


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", required=True)
    parser.add_argument("--packages", type=int, default=120)
    parser.add_argument("--months", type=int, default=18)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    start = Month(2015, 1)
    last = start + (args.months - 1)

    feed = workdir / "feed.ndjson"
    with open(feed, "w", encoding="utf-8") as fh:
        for line in synthetic_feed(
            n_packages=args.packages, n_months=args.months, start=start, seed=args.seed
        ):
            fh.write(line + "\n")

    events = workdir / "events.csv"
    store = workdir / "store"
    for argv in (
        ["ingest", "--feed", str(feed), "--out", str(events)],
        ["build", "--store", str(store), "--events", str(events),
         "--from", str(start), "--to", str(last)],
        ["detect", "--store", str(store), "--as-of", str(last),
         "--out", str(workdir / "statuses.csv")],
    ):
        code = run(argv)
        if code != 0:
            raise SystemExit(code)

    declining = [
        line.split(",")[0]
        for line in (workdir / "statuses.csv").read_text().splitlines()[1:]
        if line.split(",")[1] == "in_decline"
    ]
    print(f"{len(declining)} packages in decline as of {last}: {', '.join(declining) or '(none)'}")
    print(f"serve it: declinewatch serve --store {store}")


if __name__ == "__main__":
    main()
