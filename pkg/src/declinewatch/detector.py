"""Trend classification over monthly ranking series.

A package is "in decline" when the OLS slope of its negated ranks over the
trailing window is below the threshold and the Wald test on the slope is
significant. The Wald statistic is the squared t ratio, so the p-value
comes from a t distribution with k-2 degrees of freedom.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence, Tuple

import numpy as np
from scipy import stats

from .months import Month

logger = logging.getLogger(__name__)

IN_DECLINE = "in_decline"
NOT_IN_DECLINE = "not_in_decline"
INSUFFICIENT_DATA = "insufficient_data"


class TooFewPoints(ValueError):
    pass


class NotDetected(Exception):
    """classify() at the reference month did not say in_decline."""


class MonthlySeries(Protocol):
    def value_at(self, month: Month) -> Optional[float]: ...

    def last_month(self) -> Optional[Month]: ...


@dataclass(frozen=True)
class DetectorConfig:
    window_months: int = 6
    slope_threshold: float = 0.0
    alpha: float = 0.001

    def __post_init__(self) -> None:
        # Slope significance needs at least one residual degree of freedom.
        if self.window_months < 3:
            raise ValueError("window_months must be >= 3")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must be in (0, 1)")


@dataclass(frozen=True)
class TrendFit:
    slope: float
    intercept: float
    stderr: float
    p_value: float
    n_points: int


@dataclass(frozen=True)
class DeclineStatus:
    status: str
    fit: Optional[TrendFit]
    as_of: Month

    @property
    def in_decline(self) -> bool:
        return self.status == IN_DECLINE


def fit_trend(values: Sequence[float]) -> TrendFit:
    """Least-squares line through (0, y0)..(k-1, y_{k-1}) with a Wald p-value.

    Zero residuals leave the standard error undefined; by convention a
    perfect nonzero slope is certain (p = 0) and a perfect flat line is
    certainly flat (p = 1).
    """
    k = len(values)
    if k < 2:
        raise TooFewPoints(f"need at least 2 points, got {k}")
    y = [float(v) for v in values]
    x_mean = (k - 1) / 2.0
    y_mean = math.fsum(y) / k
    sxx = math.fsum((i - x_mean) ** 2 for i in range(k))
    sxy = math.fsum((i - x_mean) * (yi - y_mean) for i, yi in enumerate(y))
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    ssr = math.fsum((yi - (intercept + slope * i)) ** 2 for i, yi in enumerate(y))
    df = k - 2
    stderr = math.sqrt(ssr / df / sxx) if df > 0 and ssr > 0.0 else 0.0
    if stderr == 0.0:
        p_value = 1.0 if slope == 0.0 else 0.0
    else:
        t_stat = slope / stderr
        p_value = float(2.0 * stats.t.sf(abs(t_stat), df))
    return TrendFit(slope=slope, intercept=intercept, stderr=stderr, p_value=p_value, n_points=k)


def classify(series: MonthlySeries, as_of: Month, config: DetectorConfig = DetectorConfig()) -> DeclineStatus:
    """Classify the window of config.window_months calendar months ending at as_of."""
    window = []
    for offset in range(config.window_months - 1, -1, -1):
        value = series.value_at(as_of - offset)
        if value is None:
            return DeclineStatus(status=INSUFFICIENT_DATA, fit=None, as_of=as_of)
        window.append(value)
    fit = fit_trend(window)
    declining = fit.slope < config.slope_threshold and fit.p_value < config.alpha
    return DeclineStatus(status=IN_DECLINE if declining else NOT_IN_DECLINE, fit=fit, as_of=as_of)


def earliest_detection(
    series: MonthlySeries, reference: Month, config: DetectorConfig = DetectorConfig()
) -> int:
    """Length of the in_decline streak of window ends going back from reference.

    Returns months_early >= 0, i.e. how many months before `reference` the
    streak began.
    """
    if not classify(series, reference, config).in_decline:
        raise NotDetected(f"not in decline as of {reference}")
    months_early = 0
    while classify(series, reference - (months_early + 1), config).in_decline:
        months_early += 1
    return months_early


def detection_latency(
    series: MonthlySeries, reference: Month, config: DetectorConfig = DetectorConfig()
) -> Optional[int]:
    """Signed detection offset: negative = early, positive = late, None = never.

    Slides the window end forward from reference to the end of the series
    when the reference itself is not yet flagged.
    """
    if classify(series, reference, config).in_decline:
        return -earliest_detection(series, reference, config)
    last = series.last_month()
    if last is None:
        return None
    offset = 1
    while reference + offset <= last:
        if classify(series, reference + offset, config).in_decline:
            return offset
        offset += 1
    return None


def decline_score(fit: Optional[TrendFit]) -> float:
    """Continuous decline score: more positive means more decline-like."""
    return -fit.slope if fit is not None else float("-inf")


def fit_trend_batch(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Row-wise fit_trend over an (n, k) matrix.

    Returns (slope, intercept, stderr, p_value) arrays; agrees with the
    scalar path to floating-point accumulation order.
    """
    y = np.asarray(values, dtype=np.float64)
    if y.ndim != 2:
        raise ValueError("expected an (n, k) matrix")
    n, k = y.shape
    if k < 2:
        raise TooFewPoints(f"need at least 2 points, got {k}")
    x = np.arange(k, dtype=np.float64)
    x_mean = (k - 1) / 2.0
    y_mean = y.mean(axis=1)
    dx = x - x_mean
    sxx = float(np.sum(dx * dx))
    sxy = (y - y_mean[:, None]) @ dx
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    residuals = y - (intercept[:, None] + slope[:, None] * x[None, :])
    ssr = np.sum(residuals * residuals, axis=1)
    df = k - 2
    stderr = np.zeros(n, dtype=np.float64)
    p_value = np.where(slope == 0.0, 1.0, 0.0)
    if df > 0:
        regular = ssr > 0.0
        stderr[regular] = np.sqrt(ssr[regular] / df / sxx)
        t_stat = slope[regular] / stderr[regular]
        p_value[regular] = 2.0 * stats.t.sf(np.abs(t_stat), df)
    return slope, intercept, stderr, p_value


def classify_batch(
    windows: np.ndarray, config: DetectorConfig = DetectorConfig()
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Statuses plus (slope, p_value) for complete windows, one row each.

    Rows containing NaN (missing months) come back as insufficient_data
    with NaN slope and p-value.
    """
    y = np.asarray(windows, dtype=np.float64)
    if y.ndim != 2 or y.shape[1] != config.window_months:
        raise ValueError(f"expected (n, {config.window_months}) windows")
    complete = ~np.any(np.isnan(y), axis=1)
    slope = np.full(y.shape[0], np.nan)
    p_value = np.full(y.shape[0], np.nan)
    if np.any(complete):
        s, _, _, p = fit_trend_batch(y[complete])
        slope[complete] = s
        p_value[complete] = p
    status = np.full(y.shape[0], INSUFFICIENT_DATA, dtype=object)
    declining = complete & (slope < config.slope_threshold) & (p_value < config.alpha)
    status[complete & ~declining] = NOT_IN_DECLINE
    status[declining] = IN_DECLINE
    return status, slope, p_value
