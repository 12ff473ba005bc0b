"""Exact Minimum Regime Performance over constrained partitions.

A partition places s splits in a length-n series, creating s+1 contiguous
segments of at least d observations each. The engine provides:

* ``count_valid_partitions`` - closed-form stars-and-bars count,
* ``enumerate_partitions`` - lexicographic stream of all split tuples,
* ``mrp_brute_force``     - exact minimum by full enumeration (oracle),
* ``mrp_one_split``       - O(n) scan for the single-split case,
* ``mrp_fast``            - feasible-window algorithm, value-identical to
  brute force: the worst segment of the optimal partition is itself a
  contiguous window whose prefix and suffix can each be cut into valid
  segments, so minimizing over such windows suffices.

Partitions containing a zero-variance segment are infeasible rather than
scored at -inf; a constant sub-window must not hijack the minimum.
"""

from __future__ import annotations

import datetime
import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator

import numpy as np

from .errors import Infeasible, NoValidPartition
from .series import (
    SHARPE,
    MetricKind,
    PrefixTable,
    ReturnSeries,
    build_prefix_sums,
    metric_many,
)


@dataclass(frozen=True)
class PartitionSpec:
    """An ordered split set defining s+1 contiguous segments.

    Split index t means the boundary sits before observation t: the
    segment to its left ends at t (exclusive). Valid single splits are
    t in [d, n-d].
    """

    splits: tuple[int, ...]
    n: int
    d: int

    def __post_init__(self):
        bounds = (0,) + self.splits + (self.n,)
        for a, b in zip(bounds, bounds[1:]):
            if b - a < self.d:
                raise ValueError(f"segment [{a}, {b}) shorter than d={self.d}")

    @property
    def s(self) -> int:
        return len(self.splits)

    @property
    def segments(self) -> tuple[tuple[int, int], ...]:
        bounds = (0,) + self.splits + (self.n,)
        return tuple(zip(bounds, bounds[1:]))


@dataclass(frozen=True)
class MrpResult:
    """Minimum regime performance with its achieving partition."""

    value: float
    optimal_splits: PartitionSpec
    segment_metrics: tuple[float, ...]
    argmin_segment: int
    split_dates: tuple[datetime.date, ...]


def count_valid_partitions(n: int, s: int, d: int) -> int:
    """Number of valid split sets: C(n - s*d - d + s, s); 0 if n < (s+1)*d."""
    if n < 1 or s < 1 or d < 1:
        raise ValueError("n, s, d must all be >= 1")
    if n < (s + 1) * d:
        return 0
    return math.comb(n - s * d - d + s, s)


def enumerate_partitions(n: int, s: int, d: int) -> Iterator[tuple[int, ...]]:
    """Yield every valid split tuple exactly once, in lexicographic order.

    Split sets map one-to-one onto nondecreasing slack tuples: with
    w_i = t_i - i*d, validity is exactly 0 <= w_1 <= ... <= w_s <= n - (s+1)*d.
    """
    slack = n - (s + 1) * d
    if slack < 0:
        return
    offsets = tuple(i * d for i in range(1, s + 1))
    for w in combinations_with_replacement(range(slack + 1), s):
        yield tuple(map(sum, zip(w, offsets)))


def _splits_array(n: int, s: int, d: int) -> np.ndarray:
    """All valid split sets as a (P, s) int array, lexicographic row order."""
    count = count_valid_partitions(n, s, d)
    flat = np.fromiter(
        (t for splits in enumerate_partitions(n, s, d) for t in splits),
        dtype=np.int64,
        count=count * s,
    )
    return flat.reshape(count, s)


def _result_from_splits(series: ReturnSeries, splits: tuple[int, ...], d: int,
                        metrics: np.ndarray) -> MrpResult:
    spec = PartitionSpec(splits=splits, n=len(series), d=d)
    argmin = int(np.nanargmin(metrics))
    return MrpResult(
        value=float(metrics[argmin]),
        optimal_splits=spec,
        segment_metrics=tuple(float(v) for v in metrics),
        argmin_segment=argmin,
        split_dates=tuple(series.dates[t - 1] for t in splits),
    )


def _check_feasible(n: int, s: int, d: int) -> None:
    if d < 2:
        raise Infeasible("d must be >= 2 so every segment supports the metric")
    if s < 1:
        raise Infeasible("s must be >= 1")
    if n < (s + 1) * d:
        raise Infeasible(f"series length {n} < (s+1)*d = {(s + 1) * d}")


def mrp_brute_force(series: ReturnSeries, s: int, d: int,
                    kind: MetricKind = SHARPE) -> MrpResult:
    """Exact MRP_s by enumerating every valid partition.

    Ties are broken by the earliest lexicographic split set; within the
    winning partition the lowest-index worst segment is reported.
    """
    n = len(series)
    _check_feasible(n, s, d)
    table = build_prefix_sums(series)
    splits = _splits_array(n, s, d)
    p = splits.shape[0]
    bounds = np.empty((p, s + 2), dtype=np.int64)
    bounds[:, 0] = 0
    bounds[:, 1:-1] = splits
    bounds[:, -1] = n
    metrics = metric_many(
        table, bounds[:, :-1].ravel(), bounds[:, 1:].ravel(), kind
    ).reshape(p, s + 1)
    row_min = np.min(metrics, axis=1)  # NaN propagates: invalid partitions -> NaN
    valid = ~np.isnan(row_min)
    if not np.any(valid):
        raise NoValidPartition("every partition contains a zero-variance segment")
    best_value = np.nanmin(row_min)
    best_row = int(np.flatnonzero(valid & (row_min == best_value))[0])
    return _result_from_splits(series, tuple(splits[best_row].tolist()), d,
                               metrics[best_row])


def mrp_one_split(series: ReturnSeries, d: int,
                  kind: MetricKind = SHARPE) -> MrpResult:
    """MRP with a single split: O(n) scan of t in [d, n-d].

    Equivalent to ``mrp_brute_force(series, 1, d)`` including tie-breaks.
    """
    n = len(series)
    _check_feasible(n, 1, d)
    table = build_prefix_sums(series)
    ts = np.arange(d, n - d + 1, dtype=np.int64)
    left = metric_many(table, np.zeros_like(ts), ts, kind)
    right = metric_many(table, ts, np.full_like(ts, n), kind)
    pair_min = np.minimum(left, right)  # NaN where either side undefined
    if np.all(np.isnan(pair_min)):
        raise NoValidPartition("every split yields a zero-variance segment")
    best_value = np.nanmin(pair_min)
    i = int(np.flatnonzero(pair_min == best_value)[0])
    t = int(ts[i])
    return _result_from_splits(series, (t,), d, np.array([left[i], right[i]]))


def _window_ends(n: int, s: int, d: int, i: int) -> np.ndarray:
    """Valid end points j for a candidate window starting at i.

    A window [i, j) of length >= d can be a segment of some valid partition
    iff there exist k, m >= 0 with k + m = s such that the prefix [0, i)
    splits into k segments of length >= d and the suffix [j, n) into m.
    """
    if i == 0:
        # all s splits go to the right: n - j >= s*d
        return np.arange(d, n - s * d + 1, dtype=np.int64)
    kmax_left = min(s, i // d)
    if kmax_left < 1:
        return np.empty(0, dtype=np.int64)
    parts = []
    # interior j: k in [1, min(s-1, kmax_left)]; the loosest choice k = k_hi
    # gives the contiguous range j in [i+d, n - (s-k_hi)*d]
    k_hi = min(s - 1, kmax_left)
    if k_hi >= 1:
        j_hi = n - (s - k_hi) * d
        if i + d <= j_hi:
            parts.append(np.arange(i + d, j_hi + 1, dtype=np.int64))
    # j == n requires the prefix to take all s splits
    if kmax_left >= s and n - i >= d:
        parts.append(np.array([n], dtype=np.int64))
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(parts)


def _complete_partition(n: int, s: int, d: int, i: int, j: int) -> tuple[int, ...]:
    """Canonical partition having [i, j) as a segment.

    The prefix is cut into k segments and the suffix into m = s - k, each
    of length d except the last, which absorbs the remainder.
    """
    if i == 0:
        k = 0
    elif j == n:
        k = s
    else:
        k = max(1, s - (n - j) // d)
    m = s - k
    splits: list[int] = [ell * d for ell in range(1, k)]
    if k >= 1:
        splits.append(i)
    if m >= 1:
        splits.append(j)
        splits.extend(j + ell * d for ell in range(1, m))
    return tuple(splits)


def mrp_fast(series: ReturnSeries, s: int, d: int,
             kind: MetricKind = SHARPE) -> MrpResult:
    """MRP_s via the feasible-window search; value-identical to brute force.

    O(n) window evaluations for s = 1, O(n^2) otherwise, each O(1) via
    prefix sums. If any feasible window has an undefined metric (constant
    returns), falls back to brute force so that the infeasible-partition
    semantics match exactly.
    """
    n = len(series)
    _check_feasible(n, s, d)
    table = build_prefix_sums(series)

    best = (math.inf, -1, -1)  # (value, i, j), lexicographic tie-break on (i, j)

    def scan(i_arr: np.ndarray, j_arr: np.ndarray) -> bool:
        """Update ``best`` from candidate windows; False if NaN encountered."""
        nonlocal best
        vals = metric_many(table, i_arr, j_arr, kind)
        if np.any(np.isnan(vals)):
            return False
        k = int(np.argmin(vals))
        cand = (float(vals[k]), int(i_arr[k]), int(j_arr[k]))
        if cand[0] < best[0] or (cand[0] == best[0] and cand[1:] < best[1:]):
            best = cand
        return True

    ok = True
    if s == 1:
        js = np.arange(d, n - d + 1, dtype=np.int64)
        ok = scan(np.zeros_like(js), js)
        if ok:
            is_ = np.arange(d, n - d + 1, dtype=np.int64)
            ok = scan(is_, np.full_like(is_, n))
    else:
        for i in range(0, n - d + 1):
            js = _window_ends(n, s, d, i)
            if js.size == 0:
                continue
            if not scan(np.full_like(js, i), js):
                ok = False
                break
    if not ok:
        # degenerate (constant sub-window) data: defer to the oracle path
        return mrp_brute_force(series, s, d, kind)
    if not math.isfinite(best[0]):
        raise NoValidPartition("no window with a defined metric")
    _, i, j = best
    splits = _complete_partition(n, s, d, i, j)
    spec = PartitionSpec(splits=splits, n=n, d=d)
    starts = np.array([a for a, _ in spec.segments], dtype=np.int64)
    ends = np.array([b for _, b in spec.segments], dtype=np.int64)
    metrics = metric_many(table, starts, ends, kind)
    if np.any(np.isnan(metrics)):
        return mrp_brute_force(series, s, d, kind)
    return _result_from_splits(series, splits, d, metrics)


@dataclass(frozen=True)
class LeftRightReport:
    """Both segment metrics at the single-split optimum, plus the split date."""

    left_sr: float
    right_sr: float
    split_date: datetime.date


def left_right_report(series: ReturnSeries, d: int,
                      kind: MetricKind = SHARPE) -> LeftRightReport:
    """Segment metrics at the MRP_1 argmin split.

    The split date is the calendar date of the last observation of the
    left segment.
    """
    res = mrp_one_split(series, d, kind)
    return LeftRightReport(
        left_sr=res.segment_metrics[0],
        right_sr=res.segment_metrics[1],
        split_date=res.split_dates[0],
    )
