"""Per-package monthly time series used across ranking, detection, and eval."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .months import Month


@dataclass(frozen=True)
class SeriesPoint:
    month: Month
    score: float
    rank_neg: int


@dataclass(frozen=True)
class CentralitySeries:
    """Monthly centrality score and negated rank for one package.

    Months are strictly increasing and start at the package's first month
    of existence in the graph. Trend analysis reads the negated rank
    (-1 = most central), so larger values mean higher importance.
    """

    package: str
    points: Tuple[SeriesPoint, ...]

    def __post_init__(self) -> None:
        months = [p.month for p in self.points]
        if any(b <= a for a, b in zip(months, months[1:])):
            raise ValueError(f"{self.package}: series months must be strictly increasing")

    def value_at(self, month: Month) -> Optional[float]:
        point = self._index().get(month)
        return None if point is None else float(point.rank_neg)

    def last_month(self) -> Optional[Month]:
        return self.points[-1].month if self.points else None

    def _index(self) -> Dict[Month, SeriesPoint]:
        cache = self.__dict__.get("_month_index")
        if cache is None:
            cache = {p.month: p for p in self.points}
            object.__setattr__(self, "_month_index", cache)
        return cache


@dataclass(frozen=True)
class MetricSeries:
    """Monthly values of a popularity metric (downloads, stars, ...)."""

    package: str
    metric: str
    points: Tuple[Tuple[Month, float], ...]

    def value_at(self, month: Month) -> Optional[float]:
        cache = self.__dict__.get("_month_index")
        if cache is None:
            cache = {m: v for m, v in self.points}
            object.__setattr__(self, "_month_index", cache)
        return cache.get(month)

    def last_month(self) -> Optional[Month]:
        return max((m for m, _ in self.points), default=None)


def metric_series(package: str, metric: str, values: Sequence[Tuple[Month, float]]) -> MetricSeries:
    ordered = tuple(sorted(values, key=lambda mv: mv[0]))
    return MetricSeries(package=package, metric=metric, points=ordered)
