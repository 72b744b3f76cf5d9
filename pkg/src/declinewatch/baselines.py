"""Loaders for the labeled evaluation corpora.

Three corpus shapes, all small delimited files:

- npms snapshots: ``package,score`` per snapshot date
- deprecated list: ``package,date,flag`` (flag marks a verified deprecation)
- survey summaries: ``package,awareness,usage,interest,satisfaction`` shares
- metric histories: ``package,month,value`` per metric
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Union

from .evaluation import IN_DECLINE, NOT_IN_DECLINE, BaselineLabel, NpmsSnapshots
from .months import Month
from .series import MetricSeries, metric_series

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SURVEY_REFERENCE_MONTH = Month(2019, 11)


@dataclass(frozen=True)
class DeprecationRecord:
    package: str
    month: Month
    is_real_deprecation: bool


@dataclass(frozen=True)
class SurveyRecord:
    package: str
    awareness: float
    usage: float
    interest: float
    satisfaction: float


def _rows(path: PathLike, width: int) -> List[List[str]]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].startswith("#"):
                continue
            if lineno == 1 and row[0] == "package":
                continue  # optional header
            if len(row) != width:
                raise ValueError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
            rows.append(row)
    return rows


def _parse_month(text: str) -> Month:
    # accept full dates too; only the month matters here
    return Month.parse(text[:7])


def load_npms_snapshot(path: PathLike) -> Dict[str, float]:
    scores = {}
    for package, score in _rows(path, 2):
        scores[package] = float(score)
    return scores


def load_npms_snapshots(
    s1_path: PathLike,
    s2_path: PathLike,
    s3_path: PathLike,
    s1_month: Month = Month(2018, 12),
    s2_month: Month = Month(2019, 4),
    s3_month: Month = Month(2019, 6),
) -> NpmsSnapshots:
    return NpmsSnapshots(
        s1=load_npms_snapshot(s1_path),
        s2=load_npms_snapshot(s2_path),
        s3=load_npms_snapshot(s3_path),
        s1_month=s1_month,
        s2_month=s2_month,
        s3_month=s3_month,
    )


_TRUE = {"1", "true", "yes"}
_FALSE = {"0", "false", "no"}


def load_deprecated(path: PathLike) -> List[DeprecationRecord]:
    records = []
    for package, date, flag in _rows(path, 3):
        normalized = flag.strip().lower()
        if normalized not in _TRUE | _FALSE:
            raise ValueError(f"bad deprecation flag {flag!r} for {package}")
        records.append(
            DeprecationRecord(
                package=package,
                month=_parse_month(date),
                is_real_deprecation=normalized in _TRUE,
            )
        )
    return records


def deprecated_labels(records: Sequence[DeprecationRecord]) -> List[BaselineLabel]:
    """Verified deprecations become in_decline labels at the deprecation month."""
    return [
        BaselineLabel(package=r.package, label=IN_DECLINE, reference_month=r.month)
        for r in records
        if r.is_real_deprecation
    ]


def load_survey(path: PathLike) -> List[SurveyRecord]:
    records = []
    for package, awareness, usage, interest, satisfaction in _rows(path, 5):
        record = SurveyRecord(
            package=package,
            awareness=float(awareness),
            usage=float(usage),
            interest=float(interest),
            satisfaction=float(satisfaction),
        )
        for share_name in ("awareness", "usage", "interest", "satisfaction"):
            share = getattr(record, share_name)
            if not (0.0 <= share <= 1.0):
                raise ValueError(f"{package}: {share_name} share {share} outside [0, 1]")
        records.append(record)
    return records


def survey_labels(
    records: Sequence[SurveyRecord],
    reference_month: Month = SURVEY_REFERENCE_MONTH,
    satisfaction_threshold: float = 0.5,
) -> List[BaselineLabel]:
    """Satisfaction share below the threshold means in decline."""
    return [
        BaselineLabel(
            package=r.package,
            label=IN_DECLINE if r.satisfaction < satisfaction_threshold else NOT_IN_DECLINE,
            reference_month=reference_month,
        )
        for r in records
    ]


def load_metric_history(path: PathLike, metric: str) -> Dict[str, MetricSeries]:
    """One metric's monthly history for many packages."""
    by_package: Dict[str, List] = {}
    for package, month, value in _rows(path, 3):
        by_package.setdefault(package, []).append((Month.parse(month), float(value)))
    return {
        package: metric_series(package, metric, points)
        for package, points in by_package.items()
    }
