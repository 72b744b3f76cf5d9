"""Ecosystem decline detection: dependency-graph centrality trends over time."""

from .centrality import PageRankConfig, pagerank, rank_scores, run_monthly_pipeline
from .detector import (
    IN_DECLINE,
    INSUFFICIENT_DATA,
    NOT_IN_DECLINE,
    DeclineStatus,
    DetectorConfig,
    TrendFit,
    classify,
    detection_latency,
    earliest_detection,
    fit_trend,
)
from .graph import GraphBuilder, GraphSnapshot, advance_to_month, rebuild_from_scratch
from .ingest import (
    DependencyChangeEvent,
    events_from_feed,
    extract_dependency_events,
    order_and_filter_releases,
    parse_registry_doc,
)
from .months import Month, month_range
from .semver import Version, compare_semver
from .series import CentralitySeries, MetricSeries, SeriesPoint
from .store import SeriesStore, StoreView

__version__ = "0.1.0"

__all__ = [
    "CentralitySeries",
    "DeclineStatus",
    "DependencyChangeEvent",
    "DetectorConfig",
    "GraphBuilder",
    "GraphSnapshot",
    "IN_DECLINE",
    "INSUFFICIENT_DATA",
    "MetricSeries",
    "Month",
    "NOT_IN_DECLINE",
    "PageRankConfig",
    "SeriesPoint",
    "SeriesStore",
    "StoreView",
    "TrendFit",
    "Version",
    "advance_to_month",
    "classify",
    "compare_semver",
    "detection_latency",
    "earliest_detection",
    "events_from_feed",
    "extract_dependency_events",
    "fit_trend",
    "month_range",
    "order_and_filter_releases",
    "pagerank",
    "parse_registry_doc",
    "rank_scores",
    "rebuild_from_scratch",
    "run_monthly_pipeline",
]
