"""Return-series representation and per-segment risk-adjusted metrics.

Segment statistics are served from prefix sums so that any contiguous
segment's mean, standard deviation and Sharpe ratio cost O(1) after an
O(n) build. Downside-deviation metrics (Sortino) are computed by a direct
pass over the segment because the threshold-dependent sum does not fold
into a single prefix table.
"""

from __future__ import annotations

import datetime
import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    EmptySeries,
    SegmentTooShort,
    SeriesTooShort,
    WealthNonPositive,
    ZeroVariance,
)


class Frequency(enum.Enum):
    """Sampling frequency of a return series."""

    DAILY = "daily"
    MONTHLY = "monthly"

    @property
    def periods_per_year(self) -> int:
        return 252 if self is Frequency.DAILY else 12


@dataclass(frozen=True)
class MetricKind:
    """Risk-adjusted metric selector.

    ``mar`` is the minimum acceptable per-period return and is only used
    by the Sortino variant. The information ratio is the Sharpe formula
    applied to a pre-differenced (strategy minus benchmark) series.
    """

    name: str  # "sharpe" | "sortino" | "information_ratio"
    mar: float = 0.0

    def __post_init__(self):
        if self.name not in ("sharpe", "sortino", "information_ratio"):
            raise ValueError(f"unknown metric kind {self.name!r}")


SHARPE = MetricKind("sharpe")
INFORMATION_RATIO = MetricKind("information_ratio")


def sortino(mar: float = 0.0) -> MetricKind:
    return MetricKind("sortino", mar=mar)


@dataclass(frozen=True)
class ReturnSeries:
    """Dated periodic returns for one strategy.

    Returns are decimal fractions per period (0.01 = 1%) and are assumed
    to be already excess of funding (long-short factor convention).
    """

    dates: tuple[datetime.date, ...]
    returns: np.ndarray
    frequency: Frequency = Frequency.DAILY
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        rets = np.asarray(self.returns, dtype=float)
        object.__setattr__(self, "returns", rets)
        if len(self.dates) != rets.shape[0]:
            raise ValueError("dates and returns must have equal length")
        if rets.ndim != 1:
            raise ValueError("returns must be one-dimensional")
        if rets.size and not np.all(np.isfinite(rets)):
            raise ValueError(f"non-finite return in series {self.label!r}")
        for a, b in zip(self.dates, self.dates[1:]):
            if b <= a:
                raise ValueError(f"dates not strictly increasing at {b}")

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def periods_per_year(self) -> int:
        return self.frequency.periods_per_year

    def window(self, start: int, end_exclusive: int, label: str | None = None) -> "ReturnSeries":
        """Contiguous sub-series on [start, end_exclusive)."""
        return ReturnSeries(
            dates=self.dates[start:end_exclusive],
            returns=self.returns[start:end_exclusive],
            frequency=self.frequency,
            label=self.label if label is None else label,
        )

    def reversed(self) -> "ReturnSeries":
        """Series with the return sequence reversed (dates kept in order)."""
        return ReturnSeries(
            dates=self.dates,
            returns=self.returns[::-1].copy(),
            frequency=self.frequency,
            label=self.label,
        )

    def scaled(self, c: float) -> "ReturnSeries":
        return ReturnSeries(
            dates=self.dates,
            returns=c * self.returns,
            frequency=self.frequency,
            label=self.label,
        )


@dataclass(frozen=True)
class SegmentStats:
    """Per-segment summary; ``stdev`` is NaN for single-observation segments."""

    start: int
    end_exclusive: int
    n: int
    mean: float
    stdev: float
    sharpe_annualized: float


@dataclass(frozen=True)
class PrefixTable:
    """Cumulative sums enabling O(1) segment statistics.

    ``sum1[k]`` / ``sum2[k]`` hold the sum of the first k returns and
    squared returns. ``run_eq[k]`` counts adjacent equal pairs among the
    first k observations, which lets constant (zero-variance) segments be
    detected exactly, independent of floating-point cancellation.
    """

    sum1: np.ndarray
    sum2: np.ndarray
    run_eq: np.ndarray
    returns: np.ndarray
    periods_per_year: int
    n: int
    dates: tuple[datetime.date, ...] = field(repr=False, default=())


def build_prefix_sums(series: ReturnSeries) -> PrefixTable:
    """Build the prefix table for a non-empty series."""
    r = series.returns
    n = r.shape[0]
    if n == 0:
        raise EmptySeries(f"series {series.label!r} is empty")
    sum1 = np.zeros(n + 1)
    sum2 = np.zeros(n + 1)
    np.cumsum(r, out=sum1[1:])
    np.cumsum(r * r, out=sum2[1:])
    run_eq = np.zeros(n + 1, dtype=np.int64)
    if n > 1:
        np.cumsum(r[1:] == r[:-1], out=run_eq[2:])
    return PrefixTable(
        sum1=sum1,
        sum2=sum2,
        run_eq=run_eq,
        returns=r,
        periods_per_year=series.periods_per_year,
        n=n,
        dates=series.dates,
    )


def _constant_mask(table: PrefixTable, start: np.ndarray, end: np.ndarray) -> np.ndarray:
    """Exact zero-variance detection: all values in [start, end) equal."""
    start = np.asarray(start)
    end = np.asarray(end)
    # adjacent-equal pairs fully inside the segment: indices start+1 .. end-1
    pairs = table.run_eq[end] - table.run_eq[np.minimum(start + 1, end)]
    return pairs == (end - start - 1)


def segment_mean_std(table: PrefixTable, start, end) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized segment mean and sample (n-1) standard deviation.

    ``stdev`` is NaN for length-1 segments and exactly 0.0 for constant
    segments of length >= 2.
    """
    start = np.asarray(start, dtype=np.int64)
    end = np.asarray(end, dtype=np.int64)
    length = end - start
    total = table.sum1[end] - table.sum1[start]
    sq = table.sum2[end] - table.sum2[start]
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = total / length
        var = (sq - total * total / length) / (length - 1)
    var = np.where(length > 1, np.maximum(var, 0.0), np.nan)
    var = np.where(_constant_mask(table, start, end) & (length > 1), 0.0, var)
    return mean, np.sqrt(var)


def segment_stats(table: PrefixTable, start: int, end_exclusive: int) -> SegmentStats:
    """O(1) statistics of a single segment."""
    if not (0 <= start < end_exclusive <= table.n):
        raise SegmentTooShort(f"invalid segment [{start}, {end_exclusive})")
    mean, stdev = segment_mean_std(table, np.array([start]), np.array([end_exclusive]))
    mean, stdev = float(mean[0]), float(stdev[0])
    if stdev and not math.isnan(stdev):
        sharpe = mean / stdev * math.sqrt(table.periods_per_year)
    else:
        sharpe = math.nan
    return SegmentStats(start, end_exclusive, end_exclusive - start, mean, stdev, sharpe)


def sharpe_many(table: PrefixTable, start, end) -> np.ndarray:
    """Annualized Sharpe of many segments at once; NaN where undefined.

    NaN marks either a too-short (n < 2) or a zero-variance segment.
    """
    mean, stdev = segment_mean_std(table, start, end)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = mean / stdev * math.sqrt(table.periods_per_year)
    return np.where(stdev > 0, out, np.nan)


def _sortino_one(table: PrefixTable, start: int, end: int, mar: float) -> float:
    """Direct-pass Sortino on [start, end); NaN if downside deviation is 0."""
    seg = table.returns[start:end]
    downside = np.minimum(seg - mar, 0.0)
    dd = math.sqrt(float(np.mean(downside * downside)))
    if dd == 0.0:
        return math.nan
    mean = float(np.mean(seg))
    return (mean - mar) / dd * math.sqrt(table.periods_per_year)


def metric_many(table: PrefixTable, start, end, kind: MetricKind) -> np.ndarray:
    """Vectorized segment metric; NaN for infeasible segments.

    A segment is infeasible when it is shorter than 2 observations or its
    dispersion denominator is zero.
    """
    if kind.name in ("sharpe", "information_ratio"):
        return sharpe_many(table, start, end)
    start = np.asarray(start, dtype=np.int64).ravel()
    end = np.asarray(end, dtype=np.int64).ravel()
    out = np.empty(start.shape[0])
    memo: dict[tuple[int, int], float] = {}
    for i, (a, b) in enumerate(zip(start.tolist(), end.tolist())):
        if b - a < 2:
            out[i] = math.nan
            continue
        key = (a, b)
        if key not in memo:
            memo[key] = _sortino_one(table, a, b, kind.mar)
        out[i] = memo[key]
    return out


def segment_metric(table: PrefixTable, start: int, end_exclusive: int,
                   kind: MetricKind = SHARPE) -> float:
    """Annualized metric of one segment.

    sharpe = (mean / stdev) * sqrt(periods_per_year); sortino replaces the
    denominator by downside deviation below ``kind.mar``; the information
    ratio is sharpe on an already-differenced series.

    Raises SegmentTooShort for segments of fewer than 2 observations and
    ZeroVariance when the dispersion denominator is zero.
    """
    if not (0 <= start <= end_exclusive <= table.n):
        raise SegmentTooShort(f"invalid segment [{start}, {end_exclusive})")
    if end_exclusive - start < 2:
        raise SegmentTooShort(
            f"segment [{start}, {end_exclusive}) needs >= 2 observations")
    value = float(metric_many(table, np.array([start]), np.array([end_exclusive]), kind)[0])
    if math.isnan(value):
        raise ZeroVariance(
            f"segment [{start}, {end_exclusive}) has zero {kind.name} denominator")
    return value


def series_metric(series: ReturnSeries, kind: MetricKind = SHARPE) -> float:
    """Annualized metric of the whole series."""
    table = build_prefix_sums(series)
    return segment_metric(table, 0, len(series), kind)


def max_drawdown(series: ReturnSeries) -> float:
    """Maximum peak-to-trough decline of the compounded wealth path.

    Returns 1 - min_t(wealth_t / running_max_t) with wealth starting at 1.
    """
    if len(series) == 0:
        raise EmptySeries("max_drawdown of empty series")
    if np.any(series.returns <= -1.0):
        raise WealthNonPositive("return <= -100% makes wealth non-positive")
    wealth = np.concatenate(([1.0], np.cumprod(1.0 + series.returns)))
    peaks = np.maximum.accumulate(wealth)
    return float(1.0 - np.min(wealth / peaks))


def rolling_sharpe_volatility(series: ReturnSeries, window: int) -> float:
    """Standard deviation of annualized Sharpe over all contiguous windows.

    Windows with zero return dispersion are skipped (a warning reports how
    many); the standard deviation uses the n-1 denominator over the
    remaining windows.
    """
    if window < 2:
        raise SeriesTooShort("window must be >= 2")
    n = len(series)
    if n < window + 1:
        raise SeriesTooShort(f"need length >= window + 1 = {window + 1}, got {n}")
    table = build_prefix_sums(series)
    starts = np.arange(0, n - window + 1, dtype=np.int64)
    sharpes = sharpe_many(table, starts, starts + window)
    skipped = int(np.count_nonzero(np.isnan(sharpes)))
    if skipped:
        warnings.warn(f"skipped {skipped} zero-variance windows", stacklevel=2)
    valid = sharpes[~np.isnan(sharpes)]
    if valid.size < 2:
        raise SeriesTooShort("fewer than 2 usable windows")
    return float(np.std(valid, ddof=1))
