"""Empirical products built on the partition engine.

Per-factor reports, the decay-risk frontier, sensitivity grids over
(lookback, minimum-segment-length), cross-metric robustness correlations,
portfolio-level minimum regime performance, and block-bootstrap stability
checks. Grid cells and bootstrap replicates may be evaluated with worker
processes; seeding and assembly order make results independent of the
worker count.
"""

from __future__ import annotations

import datetime
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .engine import MrpResult, mrp_fast, mrp_one_split
from .errors import (
    DateMismatch,
    DegenerateVector,
    Infeasible,
    InvalidBlock,
)
from .series import (
    SHARPE,
    MetricKind,
    ReturnSeries,
    series_metric,
)

#: rolling-Sharpe-volatility window defaults per frequency (periods)
DEFAULT_ROLLING_WINDOW = {"daily": 252, "monthly": 36}


def _periods(years: float, series: ReturnSeries) -> int:
    return int(round(years * series.periods_per_year))


def _trailing_window(series: ReturnSeries, lookback_years: float) -> ReturnSeries:
    """Last lookback_years of data (the whole series if shorter)."""
    w = min(len(series), _periods(lookback_years, series))
    return series.window(len(series) - w, len(series))


@dataclass(frozen=True)
class FactorReport:
    """Full-window Sharpe and single-split minimum for one factor."""

    label: str
    full_sharpe: float
    mrp1: float
    left_sr: float
    right_sr: float
    split_date: datetime.date


def factor_report(series: ReturnSeries, lookback_years: float = 40.0,
                  d_years: float = 2.0, kind: MetricKind = SHARPE) -> FactorReport:
    """Full-window metric and MRP_1 on the trailing lookback window."""
    win = _trailing_window(series, lookback_years)
    d = _periods(d_years, series)
    if len(win) < 2 * d:
        raise Infeasible(
            f"{series.label!r}: window of {len(win)} periods < 2*d = {2 * d}")
    res = mrp_one_split(win, d, kind)
    return FactorReport(
        label=series.label,
        full_sharpe=series_metric(win, kind),
        mrp1=res.value,
        left_sr=res.segment_metrics[0],
        right_sr=res.segment_metrics[1],
        split_date=res.split_dates[0],
    )


@dataclass(frozen=True)
class FrontierPoint:
    """One strategy on the efficiency-durability plane."""

    label: str
    x: float  # full-sample metric
    y: float  # minimum regime performance
    dominated: bool


def frontier(reports: Sequence[FactorReport]) -> list[FrontierPoint]:
    """Decay-risk frontier: a point is dominated iff another point is
    strictly higher on both axes."""
    if not reports:
        raise ValueError("need at least one report")
    points = []
    for r in reports:
        dominated = any(
            o.full_sharpe > r.full_sharpe and o.mrp1 > r.mrp1 for o in reports
        )
        points.append(FrontierPoint(r.label, r.full_sharpe, r.mrp1, dominated))
    return points


@dataclass(frozen=True)
class SensitivityGrid:
    """Matrix of (MRP - full-window metric) over lookback x d.

    ``cells[i, j]`` corresponds to ``lookbacks_years[i]`` and
    ``d_years[j]``; infeasible combinations hold NaN.
    """

    label: str
    lookbacks_years: tuple[float, ...]
    d_years: tuple[float, ...]
    cells: np.ndarray

    @property
    def feasible(self) -> np.ndarray:
        return ~np.isnan(self.cells)


def _grid_cell(args) -> float:
    series, lookback, d_years, s, kind = args
    win = _trailing_window(series, lookback)
    d = _periods(d_years, series)
    if d < 2 or len(win) < (s + 1) * d:
        return math.nan
    if s == 1:
        mrp = mrp_one_split(win, d, kind).value
    else:
        mrp = mrp_fast(win, s, d, kind).value
    return mrp - series_metric(win, kind)


def sensitivity_grid(series: ReturnSeries,
                     lookbacks_years: Sequence[float] = (10, 15, 20, 25, 30, 35, 40),
                     d_years: Sequence[float] = (1, 2, 3, 4, 5),
                     s: int = 1,
                     kind: MetricKind = SHARPE,
                     jobs: int = 1) -> SensitivityGrid:
    """(MRP - metric) for every lookback/d combination.

    Cells are independent; with jobs > 1 they are farmed out to worker
    processes and reassembled in grid order, so the result is identical
    for any worker count.
    """
    if not lookbacks_years or not d_years:
        raise ValueError("lookback and d grids must be non-empty")
    tasks = [(series, lb, dy, s, kind)
             for lb in lookbacks_years for dy in d_years]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_grid_cell, tasks, chunksize=8))
    else:
        values = [_grid_cell(t) for t in tasks]
    cells = np.array(values).reshape(len(lookbacks_years), len(d_years))
    return SensitivityGrid(
        label=series.label,
        lookbacks_years=tuple(float(v) for v in lookbacks_years),
        d_years=tuple(float(v) for v in d_years),
        cells=cells,
    )


def sensitivity_by_lookback(grids: Sequence[SensitivityGrid]) -> dict[float, float]:
    """Average cell value per lookback, pooled over d and over grids."""
    out: dict[float, float] = {}
    lookbacks = grids[0].lookbacks_years
    for i, lb in enumerate(lookbacks):
        vals = np.concatenate([g.cells[i, :] for g in grids])
        out[lb] = float(np.nanmean(vals)) if np.any(~np.isnan(vals)) else math.nan
    return out


def sensitivity_by_d(grids: Sequence[SensitivityGrid]) -> dict[float, float]:
    """Average cell value per d, pooled over lookbacks and over grids."""
    out: dict[float, float] = {}
    ds = grids[0].d_years
    for j, dy in enumerate(ds):
        vals = np.concatenate([g.cells[:, j] for g in grids])
        out[dy] = float(np.nanmean(vals)) if np.any(~np.isnan(vals)) else math.nan
    return out


def robustness_correlations(labels: Sequence[str],
                            metric_vectors: dict[str, Sequence[float]]
                            ) -> tuple[list[str], np.ndarray]:
    """Pearson correlation matrix across cross-sectional metric vectors.

    Each vector holds one value per factor (>= 3 factors). Returns the
    metric names in input order and the symmetric unit-diagonal matrix.
    """
    names = list(metric_vectors)
    if len(names) < 2:
        raise ValueError("need at least two metric vectors")
    mat = np.array([np.asarray(metric_vectors[k], dtype=float) for k in names])
    if mat.shape[1] != len(labels) or mat.shape[1] < 3:
        raise ValueError("need equal-length vectors over >= 3 factors")
    stds = mat.std(axis=1)
    for name, sd in zip(names, stds):
        if sd == 0:
            raise DegenerateVector(f"metric vector {name!r} has zero variance")
    corr = np.corrcoef(mat)
    np.fill_diagonal(corr, 1.0)
    return names, corr


@dataclass(frozen=True)
class PortfolioSpec:
    """Weighted combination of aligned strategies."""

    weights: tuple[float, ...]
    strategies: tuple[ReturnSeries, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "strategies", tuple(self.strategies))
        if len(self.weights) != len(self.strategies) or not self.strategies:
            raise ValueError("weights and strategies must align and be non-empty")
        if all(w == 0 for w in self.weights):
            raise ValueError("at least one weight must be nonzero")


def _inner_join(strategies: Sequence[ReturnSeries]
                ) -> tuple[tuple[datetime.date, ...], np.ndarray]:
    """Dates common to all strategies and the aligned return matrix."""
    freq = strategies[0].frequency
    if any(s.frequency is not freq for s in strategies):
        raise DateMismatch("strategies have mixed frequencies")
    common = set(strategies[0].dates)
    for s in strategies[1:]:
        common &= set(s.dates)
    if not common:
        raise DateMismatch("no common dates across strategies")
    dates = tuple(sorted(common))
    cols = []
    for s in strategies:
        idx = {d: i for i, d in enumerate(s.dates)}
        cols.append(s.returns[[idx[d] for d in dates]])
    return dates, np.column_stack(cols)


def portfolio_mrp(spec: PortfolioSpec, s: int, d: int,
                  kind: MetricKind = SHARPE) -> MrpResult:
    """MRP of the weighted aggregate return w'X_t (inner-join alignment)."""
    dates, matrix = _inner_join(spec.strategies)
    agg = matrix @ np.asarray(spec.weights)
    combined = ReturnSeries(
        dates=dates,
        returns=agg,
        frequency=spec.strategies[0].frequency,
        label="portfolio",
    )
    return mrp_fast(combined, s, d, kind)


@dataclass(frozen=True)
class BootstrapSummary:
    """Distribution of MRP over block-bootstrap replicates."""

    mean: float
    sd: float
    quantiles: dict[float, float]
    values: np.ndarray


def _bootstrap_replicate(args) -> float:
    series, starts, block_len, s, d, kind = args
    n = len(series)
    idx = (starts[:, None] + np.arange(block_len)[None, :]).ravel()[:n] % n
    resampled = ReturnSeries(
        dates=series.dates,
        returns=series.returns[idx],
        frequency=series.frequency,
        label=series.label,
    )
    return mrp_fast(resampled, s, d, kind).value


def block_bootstrap_mrp(series: ReturnSeries, block_len: int, replicates: int,
                        s: int = 1, d: int = 2, kind: MetricKind = SHARPE,
                        seed: int = 0, jobs: int = 1) -> BootstrapSummary:
    """Circular block bootstrap of the MRP.

    Blocks of ``block_len`` consecutive returns (wrapping at the end) are
    concatenated to the original length, and the MRP is recomputed per
    replicate. All block starts are drawn up front from a counter-based
    generator, so the result depends only on the seed, not on ``jobs``.
    """
    n = len(series)
    if not (1 <= block_len <= n):
        raise InvalidBlock(f"block_len must be in [1, {n}], got {block_len}")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    rng = np.random.Generator(np.random.Philox(seed))
    nblocks = -(-n // block_len)
    starts = rng.integers(0, n, size=(replicates, nblocks))
    tasks = [(series, starts[r], block_len, s, d, kind)
             for r in range(replicates)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = np.array(list(pool.map(_bootstrap_replicate, tasks, chunksize=4)))
    else:
        values = np.array([_bootstrap_replicate(t) for t in tasks])
    qs = (0.05, 0.25, 0.5, 0.75, 0.95)
    quants = {q: float(np.quantile(values, q)) for q in qs}
    return BootstrapSummary(
        mean=float(np.mean(values)),
        sd=float(np.std(values, ddof=1)) if replicates > 1 else 0.0,
        quantiles=quants,
        values=values,
    )
