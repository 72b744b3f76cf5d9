"""Evaluation of decline predictions against labeled baselines.

Covers confusion metrics, ROC-AUC, early-detection aggregation, Spearman
correlation with Fowler-style strength buckets, and NDCG for comparing
proposed rankings against a ground truth.
"""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Protocol, Sequence, Tuple

from .detector import (
    IN_DECLINE,
    NOT_IN_DECLINE,
    DetectorConfig,
    MonthlySeries,
    NotDetected,
    detection_latency,
    earliest_detection,
)
from .months import Month
from .series import CentralitySeries

logger = logging.getLogger(__name__)

LABELS = (IN_DECLINE, NOT_IN_DECLINE)


class MissingPrediction(KeyError):
    pass


class DegenerateLabels(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class ZeroVariance(ValueError):
    pass


class SetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class NpmsSnapshots:
    """Three npms final-score snapshots: stability pair (s1, s2) plus s3."""

    s1: Mapping[str, float]
    s2: Mapping[str, float]
    s3: Mapping[str, float]
    s1_month: Month = Month(2018, 12)
    s2_month: Month = Month(2019, 4)
    s3_month: Month = Month(2019, 6)

    def __post_init__(self) -> None:
        for snap_name in ("s1", "s2", "s3"):
            for package, score in getattr(self, snap_name).items():
                if not (0.0 <= score <= 1.0):
                    raise ValueError(f"{snap_name}[{package}]: score {score} outside [0, 1]")


@dataclass(frozen=True)
class BaselineLabel:
    package: str
    label: str
    reference_month: Month

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise ValueError(f"bad label {self.label!r}")


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float
    roc_auc: Optional[float] = None
    undefined_metrics: Tuple[str, ...] = ()


@dataclass(frozen=True)
class CorrelationResult:
    package: str
    metric: str
    rho: float
    bucket: str


@dataclass(frozen=True)
class EarlyDetectionRow:
    dataset: str
    labeled: int
    classified: int
    mean_months: Optional[float]
    median_months: Optional[float]


class SeriesProvider(Protocol):
    def has_package(self, name: str) -> bool: ...

    def series(self, name: str) -> CentralitySeries: ...


def build_npms_baseline(
    snaps: NpmsSnapshots,
    stability_tol: float = 0.01,
    decline_delta: float = 0.2,
    min_score: float = 0.7,
    min_score_snapshot: str = "s3",
) -> List[BaselineLabel]:
    """Label packages from the score movement between the second and third
    snapshots, after filtering for phase-1 stability and a minimum score.

    Packages that dropped, but by no more than decline_delta, are excluded
    entirely (neither label). The minimum-score filter is applied at the
    third snapshot by default; the snapshot is configurable.
    """
    if min_score_snapshot not in ("s1", "s2", "s3"):
        raise ValueError(f"bad snapshot {min_score_snapshot!r}")
    gate = getattr(snaps, min_score_snapshot)
    labels = []
    for package in sorted(snaps.s1.keys() & snaps.s2.keys() & snaps.s3.keys()):
        s1, s2, s3 = snaps.s1[package], snaps.s2[package], snaps.s3[package]
        if abs(s2 - s1) >= stability_tol:
            continue
        if gate[package] < min_score:
            continue
        if s2 - s3 > decline_delta:
            labels.append(BaselineLabel(package, IN_DECLINE, snaps.s2_month))
        elif s3 >= s2:
            labels.append(BaselineLabel(package, NOT_IN_DECLINE, snaps.s2_month))
        # drop in (0, decline_delta]: ambiguous, excluded
    return labels


def confusion_metrics(
    labels: Sequence[BaselineLabel], predictions: Mapping[str, str]
) -> EvalReport:
    """Confusion counts and P/R/F1; insufficient_data predictions count as
    not_in_decline. Undefined ratios become NaN and are listed by name."""
    tp = fp = fn = tn = 0
    for label in labels:
        if label.package not in predictions:
            raise MissingPrediction(label.package)
        predicted_decline = predictions[label.package] == IN_DECLINE
        if label.label == IN_DECLINE:
            tp += predicted_decline
            fn += not predicted_decline
        else:
            fp += predicted_decline
            tn += not predicted_decline
    undefined = []
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision = math.nan
        undefined.append("precision")
    if tp + fn > 0:
        recall = tp / (tp + fn)
    else:
        recall = math.nan
        undefined.append("recall")
    if not undefined and precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1 = math.nan
        undefined.append("f1")
    return EvalReport(
        tp=tp, fp=fp, fn=fn, tn=tn,
        precision=precision, recall=recall, f1=f1,
        undefined_metrics=tuple(undefined),
    )


def _fractional_ranks(values: Sequence[float]) -> List[float]:
    """1-based ranks, ties averaged."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def roc_auc(labels: Sequence[BaselineLabel], scores: Mapping[str, float]) -> float:
    """AUC via the rank statistic: P(score_pos > score_neg) + half the ties.

    Equivalent to sweeping a threshold over the scores and integrating the
    ROC curve trapezoidally.
    """
    pos_scores, neg_scores = [], []
    for label in labels:
        if label.package not in scores:
            raise MissingPrediction(label.package)
        score = scores[label.package]
        if math.isnan(score):
            raise ValueError(f"NaN score for {label.package}")
        (pos_scores if label.label == IN_DECLINE else neg_scores).append(score)
    if not pos_scores or not neg_scores:
        raise DegenerateLabels("need both classes for ROC-AUC")
    ranks = _fractional_ranks(pos_scores + neg_scores)
    pos_rank_sum = sum(ranks[: len(pos_scores)])
    n_pos, n_neg = len(pos_scores), len(neg_scores)
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rho: Pearson correlation of fractional ranks."""
    if len(x) != len(y):
        raise LengthMismatch(f"{len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ZeroVariance("need at least 2 points")
    rx = _fractional_ranks(x)
    ry = _fractional_ranks(y)
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    sxx = sum((a - mx) ** 2 for a in rx)
    syy = sum((b - my) ** 2 for b in ry)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("constant input, correlation undefined")
    sxy = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    return sxy / math.sqrt(sxx * syy)


_BUCKET_EDGES = (
    (0.19, "very_weak"),
    (0.39, "weak"),
    (0.69, "moderate"),
    (0.89, "strong"),
    (1.00, "very_strong"),
)


def bucket_rho(rho: float) -> str:
    """Correlation-strength bucket over |rho| rounded to 2 decimals,
    signed by the sign of rho (zero counts as positive)."""
    if not (-1.0 <= rho <= 1.0):
        raise ValueError(f"rho {rho} outside [-1, 1]")
    magnitude = round(abs(rho), 2)
    sign = "negative" if rho < 0 else "positive"
    for upper, strength in _BUCKET_EDGES:
        if magnitude <= upper:
            return f"{strength}_{sign}"
    raise AssertionError("unreachable")


def correlation_result(package: str, metric: str, rho: float) -> CorrelationResult:
    return CorrelationResult(package=package, metric=metric, rho=rho, bucket=bucket_rho(rho))


def correlation_buckets(results: Sequence[CorrelationResult]) -> Dict[str, int]:
    histogram: Dict[str, int] = {}
    for result in results:
        histogram[result.bucket] = histogram.get(result.bucket, 0) + 1
    return histogram


def ndcg(proposed: Sequence[str], ground_truth: Sequence[str]) -> float:
    """Normalized DCG of `proposed` against `ground_truth` over the same set.

    Relevance of a package is K minus its 1-based ground-truth position, so
    the ground-truth ordering itself is the ideal.
    """
    if set(proposed) != set(ground_truth) or len(proposed) != len(ground_truth):
        raise SetMismatch("rankings must cover the same package set")
    if len(set(proposed)) != len(proposed):
        raise SetMismatch("duplicate packages in ranking")
    k = len(ground_truth)
    relevance = {package: k - position for position, package in enumerate(ground_truth, start=1)}

    def dcg(ranking: Sequence[str]) -> float:
        return sum(
            relevance[package] / math.log2(position + 1)
            for position, package in enumerate(ranking, start=1)
        )

    ideal = dcg(ground_truth)
    if ideal == 0.0:
        return 1.0  # single item: only one ordering exists
    return dcg(proposed) / ideal


def early_detection_report(
    labels_by_dataset: Mapping[str, Sequence[BaselineLabel]],
    provider: SeriesProvider,
    config: DetectorConfig = DetectorConfig(),
) -> List[EarlyDetectionRow]:
    """Per dataset: how many in_decline labels the detector confirms at their
    reference month, and the mean/median months of early detection."""
    rows = []
    for dataset in sorted(labels_by_dataset):
        months_early: List[int] = []
        labeled = 0
        for label in labels_by_dataset[dataset]:
            if label.label != IN_DECLINE:
                continue
            labeled += 1
            if not provider.has_package(label.package):
                continue
            try:
                months_early.append(
                    earliest_detection(provider.series(label.package), label.reference_month, config)
                )
            except NotDetected:
                continue
        rows.append(
            EarlyDetectionRow(
                dataset=dataset,
                labeled=labeled,
                classified=len(months_early),
                mean_months=statistics.mean(months_early) if months_early else None,
                median_months=statistics.median(months_early) if months_early else None,
            )
        )
    return rows


def slope_analysis_for_metric(
    metric_series: MonthlySeries, reference: Month, config: DetectorConfig = DetectorConfig()
) -> Optional[int]:
    """detection_latency over a raw popularity-metric series (not ranks)."""
    return detection_latency(metric_series, reference, config)
