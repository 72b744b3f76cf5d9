#!/usr/bin/env python3
"""Benchmark one monthly update cycle at ecosystem scale.

Builds a synthetic ecosystem (default 140k packages, 1M edges, six months
of history), then times a single incremental cycle: apply the month's
event delta, rerank with PageRank, append to the store, and reclassify
every package. Prints a breakdown and the budget verdict.
"""

import argparse
import time

from declinewatch.service import ServiceRuntime
from declinewatch.store import SeriesStore
from declinewatch.synth import scale_fixture


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--packages", type=int, default=140_000)
    parser.add_argument("--edges", type=int, default=1_000_000)
    parser.add_argument("--budget-seconds", type=float, default=60.0)
    parser.add_argument("--seed", type=int, default=2019)
    args = parser.parse_args()

    t0 = time.monotonic()
    fixture = scale_fixture(n_packages=args.packages, n_edges=args.edges, seed=args.seed)
    t1 = time.monotonic()
    print(
        f"fixture: {args.packages:,} packages, {len(fixture.setup_events):,} setup events,"
        f" {len(fixture.delta_events):,} delta events ({t1 - t0:.1f}s to generate)"
    )

    runtime = ServiceRuntime(SeriesStore.in_memory())
    runtime.run_update_cycle(fixture.setup_events, through=fixture.setup_through)
    t2 = time.monotonic()
    print(f"history warm-up through {fixture.setup_through}: {t2 - t1:.1f}s (not measured)")

    summary = runtime.run_update_cycle(fixture.delta_events)
    elapsed = time.monotonic() - t2
    state = runtime.holder.current()
    print(
        f"measured cycle for {fixture.measured_month}: {elapsed:.2f}s"
        f" ({summary.months_advanced} month, {summary.packages_ranked:,} rankings,"
        f" {len(state.statuses):,} statuses)"
    )
    verdict = "PASS" if elapsed < args.budget_seconds else "FAIL"
    print(f"budget {args.budget_seconds:.0f}s: {verdict}")


if __name__ == "__main__":
    main()
