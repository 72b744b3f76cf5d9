"""Read-only HTTP API over the ranking store.

One exclusive updater advances the pipeline by completed months and then
swaps in a fresh immutable view; readers keep whatever view they grabbed,
so every response reflects exactly one monthly store. Decline statuses are
precomputed per package at swap time, never per request.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .centrality import PageRankConfig, run_monthly_pipeline
from .detector import INSUFFICIENT_DATA, DetectorConfig, classify_batch
from .graph import EventCursor, EventsOutOfOrder, GraphBuilder
from .ingest import DependencyChangeEvent
from .months import Month
from .store import SeriesStore, StoreView

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StatusRecord:
    status: str
    slope: Optional[float]
    p_value: Optional[float]


@dataclass(frozen=True)
class UpdateSummary:
    months_advanced: int
    packages_ranked: int
    wall_time_seconds: float
    through: Optional[Month]


class ServiceState:
    """Immutable bundle served to readers: a store view plus its decline cache."""

    def __init__(self, view: StoreView, statuses: Dict[str, StatusRecord]) -> None:
        self.view = view
        self.statuses = statuses


class StoreHolder:
    """Single mutable cell; assignment is atomic, readers never block."""

    def __init__(self, state: Optional[ServiceState] = None) -> None:
        self._state = state

    def current(self) -> Optional[ServiceState]:
        return self._state

    def swap(self, state: ServiceState) -> None:
        self._state = state


def compute_decline_cache(view: StoreView, config: DetectorConfig) -> Dict[str, StatusRecord]:
    """Classify every package at the view's latest month in one vectorized pass."""
    if not view.months or not view.names:
        return {}
    as_of = view.months[-1]
    windows = view.windows_ending(as_of, config.window_months)
    statuses, slopes, p_values = classify_batch(windows, config)
    cache = {}
    for row, name in enumerate(view.names):
        if statuses[row] == INSUFFICIENT_DATA:
            cache[name] = StatusRecord(status=INSUFFICIENT_DATA, slope=None, p_value=None)
        else:
            cache[name] = StatusRecord(
                status=str(statuses[row]),
                slope=float(slopes[row]),
                p_value=float(p_values[row]),
            )
    return cache


class ServiceRuntime:
    """Owns the store, the incremental graph, and the served state."""

    def __init__(
        self,
        store: SeriesStore,
        pagerank_config: PageRankConfig = PageRankConfig(),
        detector_config: DetectorConfig = DetectorConfig(),
    ) -> None:
        self.store = store
        self.pagerank_config = pagerank_config
        self.detector_config = detector_config
        self.holder = StoreHolder()
        self._builder = GraphBuilder()
        self._cursor = EventCursor()
        self._events: List[DependencyChangeEvent] = []
        self._update_lock = threading.Lock()
        if store.months:
            self.refresh()

    def refresh(self) -> None:
        view = self.store.view()
        self.holder.swap(ServiceState(view, compute_decline_cache(view, self.detector_config)))

    def run_update_cycle(
        self, events: Sequence[DependencyChangeEvent], through: Optional[Month] = None
    ) -> UpdateSummary:
        """Apply an event-log delta and advance by any newly completed months.

        Without an explicit `through`, a month counts as completed only once
        an event from a later month has been seen.
        """
        started = time.monotonic()
        with self._update_lock:
            # reject a bad delta before touching any state
            prev_key = self._events[-1].sort_key if self._events else None
            for event in events:
                if prev_key is not None and event.sort_key < prev_key:
                    raise EventsOutOfOrder("delta is older than the accumulated log")
                prev_key = event.sort_key
            self._events.extend(events)
            target = through
            if target is None and self._events:
                target = Month.containing(self._events[-1].time) - 1
            if target is None:
                return UpdateSummary(0, 0, time.monotonic() - started, None)
            if self.store.months:
                start = self.store.months[-1] + 1
            elif self._events:
                start = Month.containing(self._events[0].time)
            else:
                start = target
            if target < start:
                return UpdateSummary(0, 0, time.monotonic() - started, target)
            progress = run_monthly_pipeline(
                self._events,
                start,
                target,
                config=self.pagerank_config,
                store=self.store,
                builder=self._builder,
                cursor=self._cursor,
            )
            # swap only after every month landed; readers keep the old view
            # until this assignment
            self.refresh()
            return UpdateSummary(
                months_advanced=len(progress.months_completed),
                packages_ranked=progress.packages_ranked,
                wall_time_seconds=time.monotonic() - started,
                through=target,
            )


def create_app(holder: StoreHolder):
    """FastAPI app over a StoreHolder; imported lazily so the pipeline has no
    hard dependency on the web stack."""
    from fastapi import FastAPI, HTTPException, Query
    from fastapi.middleware.cors import CORSMiddleware

    app = FastAPI(title="declinewatch", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.get("/v1/health")
    def health():
        state = holder.current()
        if state is None or not state.view.months:
            return {"status": "empty", "months": 0, "packages": 0, "latest_month": None}
        return {
            "status": "ok",
            "months": len(state.view.months),
            "packages": len(state.view.names),
            "latest_month": str(state.view.months[-1]),
        }

    @app.get("/v1/packages/{name:path}/centrality")
    def package_centrality(name: str, months: int = Query(default=12, ge=1)):
        state = holder.current()
        if state is None or not state.view.months:
            raise HTTPException(status_code=503, detail="store unavailable")
        view = state.view
        if not view.has_package(name):
            raise HTTPException(status_code=404, detail=f"unknown package: {name}")
        computed_at = view.months[-1]
        first = computed_at - (months - 1)
        points = []
        missing = []
        by_month = {p.month: p for p in view.series(name).points}
        for offset in range(months - 1, -1, -1):
            month = computed_at - offset
            point = by_month.get(month)
            if point is None:
                missing.append(str(month))
            else:
                points.append(
                    {"month": str(month), "rank_neg": point.rank_neg, "score": point.score}
                )
        record = state.statuses.get(
            name, StatusRecord(status=INSUFFICIENT_DATA, slope=None, p_value=None)
        )
        return {
            "package": name,
            "computed_at": str(computed_at),
            "window": {"from": str(first), "to": str(computed_at), "months": months},
            "series": points,
            "missing_months": missing,
            "decline": {
                "status": record.status,
                "slope": record.slope,
                "p_value": record.p_value,
                "as_of": str(computed_at),
            },
        }

    return app


def serve(holder: StoreHolder, host: str = "127.0.0.1", port: int = 8184) -> None:
    import uvicorn

    uvicorn.run(create_app(holder), host=host, port=port, log_level="warning")
