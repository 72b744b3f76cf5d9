"""Deterministic synthetic fixtures: planted-decline series, registry feeds,
and a large ecosystem for the scalability budget.

Everything here is seeded; identical arguments produce identical bytes.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .ingest import ADD, REMOVE, DependencyChangeEvent
from .months import Month, format_rfc3339
from .store import SeriesStore

logger = logging.getLogger(__name__)


def planted_rank_values(
    n_months: int, onset_index: Optional[int], base: int = -1000, step: int = 10
) -> List[int]:
    """Negated-rank trajectory rising by `step` per month, then falling by
    `step` per month from `onset_index` on; no onset means rising forever.

    The symmetric slopes keep windows that straddle the peak from reaching
    significance, so detection starts exactly at onset + window - 1.
    """
    values = []
    for t in range(n_months):
        if onset_index is None or t <= onset_index:
            values.append(base + step * t)
        else:
            values.append(base + step * onset_index - step * (t - onset_index))
    return values


def planted_store(
    onsets: Mapping[str, Optional[int]],
    start: Month = Month(2018, 1),
    n_months: int = 30,
    base: int = -1000,
    step: int = 10,
) -> SeriesStore:
    """In-memory store of planted trajectories, one package per entry."""
    trajectories = {
        package: planted_rank_values(n_months, onset, base=base, step=step)
        for package, onset in onsets.items()
    }
    store = SeriesStore.in_memory()
    for t in range(n_months):
        month = start + t
        ranks = {package: values[t] for package, values in trajectories.items()}
        scores = {package: abs(rank) / 10_000.0 for package, rank in ranks.items()}
        store.append_month(month, scores, ranks)
    return store


def synthetic_feed(
    n_packages: int = 40,
    n_months: int = 18,
    start: Month = Month(2015, 1),
    seed: int = 7,
    backport_every: int = 9,
) -> List[str]:
    """Registry-style JSON documents, one line per package.

    Each package gains a release every few months with a drifting dependency
    set drawn from the other packages; every `backport_every`-th package also
    publishes an out-of-order lower version that the release filter must drop.
    """
    rng = random.Random(seed)
    names = [f"pkg-{i:03d}" for i in range(n_packages)]
    lines = []
    for i, name in enumerate(names):
        candidates = [n for n in names if n != name]
        current: set = set()
        versions = {}
        times = {}
        major, minor = 1, 0
        release_months = sorted(rng.sample(range(n_months), k=rng.randint(2, min(6, n_months))))
        for month_index in release_months:
            if current and rng.random() < 0.4:
                current.discard(rng.choice(sorted(current)))
            for _ in range(rng.randint(0, 2)):
                current.add(rng.choice(candidates))
            if rng.random() < 0.2:
                major += 1
                minor = 0
            else:
                minor += 1
            when = (start + month_index).start.replace(
                day=rng.randint(1, 28), hour=rng.randint(0, 23), minute=rng.randint(0, 59)
            )
            version = f"{major}.{minor}.0"
            versions[version] = {"dependencies": {dep: "*" for dep in sorted(current)}}
            times[version] = format_rfc3339(when)
        if i % backport_every == backport_every - 1 and len(release_months) >= 2:
            # a patch to an old line, released last but semver-lower
            when = (start + release_months[-1]).start.replace(day=28, hour=23)
            versions["0.9.9"] = {"dependencies": {}}
            times["0.9.9"] = format_rfc3339(when)
        lines.append(
            json.dumps(
                {"_id": name, "name": name, "versions": versions, "time": times},
                sort_keys=True,
            )
        )
    return lines


@dataclass
class ScaleFixture:
    setup_events: List[DependencyChangeEvent]
    setup_through: Month
    delta_events: List[DependencyChangeEvent]
    measured_month: Month
    n_packages: int


def _month_time(month: Month, second_offset: int = 0) -> datetime:
    base = month.start
    return base if second_offset == 0 else datetime.fromtimestamp(
        base.timestamp() + second_offset, tz=timezone.utc
    )


def _events_for_pairs(
    pairs: np.ndarray, names: Sequence[str], when: datetime, action: str
) -> List[DependencyChangeEvent]:
    """Events for (source_id, target_id) rows, emitted in (source, target) order."""
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    events = []
    for row in order:
        src = int(pairs[row, 0])
        dst = int(pairs[row, 1])
        events.append(
            DependencyChangeEvent(
                time=when, source=names[src], target=names[dst], action=action
            )
        )
    return events


def scale_fixture(
    n_packages: int = 140_000,
    n_edges: int = 1_000_000,
    history_months: int = 6,
    churn_adds: int = 5_000,
    churn_removes: int = 2_000,
    start: Month = Month(2019, 1),
    seed: int = 20_19,
) -> ScaleFixture:
    """Ecosystem-scale fixture: the full edge set lands in the first month,
    later months churn a few thousand edges. Sorting happens at construction
    so the event stream satisfies the global log order."""
    rng = np.random.default_rng(seed)
    names = [f"p{i:06d}" for i in range(n_packages)]

    seen = set()
    chunks = []
    total = 0
    while total < n_edges:
        raw = rng.integers(0, n_packages, size=(n_edges, 2), dtype=np.int64)
        raw = raw[raw[:, 0] != raw[:, 1]]
        keys = raw[:, 0] * n_packages + raw[:, 1]
        fresh = []
        for i, key in enumerate(keys.tolist()):
            if key not in seen:
                seen.add(key)
                fresh.append(i)
        take = raw[fresh][: n_edges - total]
        chunks.append(take)
        total += len(take)
    initial = np.concatenate(chunks)

    setup_events = _events_for_pairs(initial, names, _month_time(start), ADD)
    for m in range(1, history_months):
        when = _month_time(start + m)
        adds = rng.integers(0, n_packages, size=(200, 2), dtype=np.int64)
        adds = adds[adds[:, 0] != adds[:, 1]]
        setup_events.extend(_events_for_pairs(adds, names, when, ADD))
    setup_through = start + (history_months - 1)

    measured_month = start + history_months
    when = _month_time(measured_month)
    adds = rng.integers(0, n_packages, size=(churn_adds, 2), dtype=np.int64)
    adds = adds[adds[:, 0] != adds[:, 1]]
    remove_rows = rng.choice(len(initial), size=churn_removes, replace=False)
    delta_events = _events_for_pairs(adds, names, when, ADD)
    delta_events.extend(
        _events_for_pairs(initial[remove_rows], names, _month_time(measured_month, 3600), REMOVE)
    )
    marker_month = measured_month + 1
    delta_events.append(
        DependencyChangeEvent(
            time=_month_time(marker_month), source=names[0], target=names[1], action=ADD
        )
    )
    return ScaleFixture(
        setup_events=setup_events,
        setup_through=setup_through,
        delta_events=delta_events,
        measured_month=measured_month,
        n_packages=n_packages,
    )
