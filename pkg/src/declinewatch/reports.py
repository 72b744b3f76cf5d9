"""Report rendering: classification and early-detection tables, JSON dumps.

Text output mirrors the usual two-table layout (confusion metrics, then
per-dataset early detection); JSON output is sorted and newline-terminated
so identical inputs always produce identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

from .evaluation import EarlyDetectionRow, EvalReport


def _ratio(value: float) -> str:
    return "n/a" if math.isnan(value) else f"{value:.2f}"


def classification_table(report: EvalReport) -> str:
    lines = [
        "Classification against labeled packages",
        f"  True Positive (Tp)    {report.tp:>7,}",
        f"  False Positive (Fp)   {report.fp:>7,}",
        f"  False Negative (Fn)   {report.fn:>7,}",
        f"  True Negative (Tn)    {report.tn:>7,}",
        f"  Precision             {_ratio(report.precision):>7}",
        f"  Recall                {_ratio(report.recall):>7}",
        f"  F1-measure            {_ratio(report.f1):>7}",
    ]
    if report.roc_auc is not None:
        lines.append(f"  ROC-AUC               {report.roc_auc:>7.2f}")
    return "\n".join(lines) + "\n"


def early_detection_table(rows: Sequence[EarlyDetectionRow]) -> str:
    header = f"{'Dataset':<16} {'#Labeled':>9} {'#Classified':>12} {'Mean':>7} {'Median':>7}"
    lines = [header, "-" * len(header)]
    for row in rows:
        mean = f"{row.mean_months:.2f}" if row.mean_months is not None else "n/a"
        median = f"{row.median_months:.2f}" if row.median_months is not None else "n/a"
        lines.append(
            f"{row.dataset:<16} {row.labeled:>9,} {row.classified:>12,} {mean:>7} {median:>7}"
        )
    return "\n".join(lines) + "\n"


def eval_report_dict(report: EvalReport) -> Dict[str, object]:
    def _nan_safe(value: float) -> Optional[float]:
        return None if math.isnan(value) else value

    payload: Dict[str, object] = {
        "tp": report.tp,
        "fp": report.fp,
        "fn": report.fn,
        "tn": report.tn,
        "precision": _nan_safe(report.precision),
        "recall": _nan_safe(report.recall),
        "f1": _nan_safe(report.f1),
        "undefined_metrics": list(report.undefined_metrics),
    }
    if report.roc_auc is not None:
        payload["roc_auc"] = report.roc_auc
    return payload


def early_detection_dict(rows: Sequence[EarlyDetectionRow]) -> List[Dict[str, object]]:
    return [
        {
            "dataset": row.dataset,
            "labeled": row.labeled,
            "classified": row.classified,
            "mean_months": row.mean_months,
            "median_months": row.median_months,
        }
        for row in rows
    ]


def write_json(path: Union[str, Path], payload: object) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


@dataclass(frozen=True)
class MetricLatencyRow:
    metric: str
    compared: int
    before_or_with_centrality: int
    after_centrality: int
    never_detected: int


def metric_latency_report(
    metric_latencies: Mapping[str, Mapping[str, Optional[int]]],
    centrality_latencies: Mapping[str, Optional[int]],
) -> List[MetricLatencyRow]:
    """Compare per-metric slope-analysis latencies against the centrality
    detector's, package by package. Only packages the centrality detector
    ever flags are comparable."""
    rows = []
    for metric in sorted(metric_latencies):
        latencies = metric_latencies[metric]
        compared = before = after = never = 0
        for package, metric_latency in sorted(latencies.items()):
            centrality_latency = centrality_latencies.get(package)
            if centrality_latency is None:
                continue
            compared += 1
            if metric_latency is None:
                never += 1
            elif metric_latency <= centrality_latency:
                before += 1
            else:
                after += 1
        rows.append(
            MetricLatencyRow(
                metric=metric,
                compared=compared,
                before_or_with_centrality=before,
                after_centrality=after,
                never_detected=never,
            )
        )
    return rows


def metric_latency_table(rows: Sequence[MetricLatencyRow]) -> str:
    header = f"{'Metric':<12} {'#Compared':>9} {'Before/with':>12} {'After':>7} {'Never':>7}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row.metric:<12} {row.compared:>9} {row.before_or_with_centrality:>12} "
            f"{row.after_centrality:>7} {row.never_detected:>7}"
        )
    return "\n".join(lines) + "\n"
