"""Command-line surface.

Subcommands: report, frontier, sensitivity, correlations, portfolio,
bias, simulate, fixture. All outputs are deterministic given flags and
seed; numbers are serialized with 6 decimal places in CSV, and the JSON
encoding carries the same values. Exit codes: 0 success, 1 data/compute
error (diagnostic on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import analytics, bias as bias_mod, ingest
from .engine import mrp_fast
from .errors import MinRegimeError
from .series import (
    SHARPE,
    Frequency,
    MetricKind,
    ReturnSeries,
    max_drawdown,
    rolling_sharpe_volatility,
    sortino,
)


def _fmt(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "Infeasible"
    return f"{value:.6f}"


def _mmddyy(day: datetime.date) -> str:
    return day.strftime("%m/%d/%y")


def parse_duration(text: str, frequency: Frequency) -> int:
    """Parse '2y' (years) or '504p' (periods) into a period count."""
    text = text.strip()
    if text.endswith("y"):
        return int(round(float(text[:-1]) * frequency.periods_per_year))
    if text.endswith("p"):
        return int(text[:-1])
    raise argparse.ArgumentTypeError(
        f"duration {text!r} needs a 'y' or 'p' suffix")


def parse_years(text: str) -> float:
    """Parse '40y' (or a bare number) into years."""
    text = text.strip()
    if text.endswith("y"):
        text = text[:-1]
    return float(text)


def parse_range(text: str) -> list[float]:
    """Parse 'lo:hi:step[y]' or a comma list into a list of year values."""
    text = text.strip()
    if text.endswith("y"):
        text = text[:-1]
    if ":" in text:
        lo, hi, step = (float(p) for p in text.split(":"))
        out, v = [], lo
        while v <= hi + 1e-9:
            out.append(v)
            v += step
        return out
    return [float(p) for p in text.split(",")]


def _emit(rows: list[dict], fieldnames: list[str], out: str | None,
          fmt: str) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(rows, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _metric_kind(args) -> MetricKind:
    if args.metric == "sortino":
        return sortino(args.mar)
    return SHARPE


def _load(args) -> list[ReturnSeries]:
    config = ingest.IngestConfig(
        path=args.input,
        start_date=args.start_date,
        frequency=Frequency(args.frequency),
        percent=args.percent,
    )
    return ingest.load_csv(config)


def _reports(series_list, args) -> list[analytics.FactorReport]:
    kind = _metric_kind(args)
    freq = Frequency(args.frequency)
    d_periods = parse_duration(args.min_segment, freq)
    lookback = parse_years(args.lookback)
    d_years = d_periods / freq.periods_per_year
    return [analytics.factor_report(s, lookback, d_years, kind)
            for s in series_list]


def cmd_report(args) -> None:
    rows = []
    for r in _reports(_load(args), args):
        rows.append({
            "label": r.label,
            "sharpe": _fmt(r.full_sharpe),
            "mrp1": _fmt(r.mrp1),
            "left_sr": _fmt(r.left_sr),
            "right_sr": _fmt(r.right_sr),
            "split_date": _mmddyy(r.split_date),
        })
    _emit(rows, ["label", "sharpe", "mrp1", "left_sr", "right_sr", "split_date"],
          args.out, args.format)


def cmd_frontier(args) -> None:
    points = analytics.frontier(_reports(_load(args), args))
    rows = [{"label": p.label, "sharpe": _fmt(p.x), "mrp": _fmt(p.y),
             "dominated": str(p.dominated).lower()} for p in points]
    _emit(rows, ["label", "sharpe", "mrp", "dominated"], args.out, args.format)


def cmd_sensitivity(args) -> None:
    kind = _metric_kind(args)
    rows = []
    for s in _load(args):
        grid = analytics.sensitivity_grid(
            s, parse_range(args.lookbacks), parse_range(args.ds),
            s=args.splits, kind=kind, jobs=args.jobs)
        for i, lb in enumerate(grid.lookbacks_years):
            for j, dy in enumerate(grid.d_years):
                rows.append({
                    "label": grid.label,
                    "lookback_years": f"{lb:g}",
                    "d_years": f"{dy:g}",
                    "mrp_minus_sharpe": _fmt(float(grid.cells[i, j])),
                })
    _emit(rows, ["label", "lookback_years", "d_years", "mrp_minus_sharpe"],
          args.out, args.format)


def cmd_correlations(args) -> None:
    series_list = _load(args)
    reports = _reports(series_list, args)
    windows = {s.label: s for s in series_list}
    roll_w = analytics.DEFAULT_ROLLING_WINDOW[args.frequency]
    labels, mrp_v, sr_v, rv_v, dd_v = [], [], [], [], []
    for r in reports:
        s = windows[r.label]
        win = analytics._trailing_window(s, parse_years(args.lookback))
        labels.append(r.label)
        mrp_v.append(r.mrp1)
        sr_v.append(r.full_sharpe)
        rv_v.append(rolling_sharpe_volatility(win, roll_w))
        dd_v.append(max_drawdown(win))
    names, corr = analytics.robustness_correlations(labels, {
        "mrp": mrp_v,
        "sharpe": sr_v,
        "rolling_sharpe_vol": rv_v,
        "max_drawdown": dd_v,
    })
    rows = []
    for i, name in enumerate(names):
        row = {"metric": name}
        for j, other in enumerate(names):
            row[other] = _fmt(float(corr[i, j]))
        rows.append(row)
    _emit(rows, ["metric"] + names, args.out, args.format)


def cmd_portfolio(args) -> None:
    series_list = _load(args)
    by_label = {s.label: s for s in series_list}
    weights, strategies = [], []
    for part in args.weights.split(","):
        name, _, w = part.partition("=")
        name = name.strip()
        if name not in by_label:
            raise MinRegimeError(f"unknown strategy {name!r} in --weights")
        strategies.append(by_label[name])
        weights.append(float(w))
    spec = analytics.PortfolioSpec(tuple(weights), tuple(strategies))
    freq = Frequency(args.frequency)
    d = parse_duration(args.min_segment, freq)
    res = analytics.portfolio_mrp(spec, args.splits, d, _metric_kind(args))
    rows = [{
        "mrp": _fmt(res.value),
        "splits": " ".join(str(t) for t in res.optimal_splits.splits),
        "split_dates": " ".join(day.isoformat() for day in res.split_dates),
        "argmin_segment": str(res.argmin_segment),
    }]
    _emit(rows, ["mrp", "splits", "split_dates", "argmin_segment"],
          args.out, args.format)


def cmd_bias(args) -> None:
    rows = []
    for n in args.N:
        model = bias_mod.BiasModel(mu=args.mu, sigma=args.sigma, s=1, n_s=n)
        exact = bias_mod.bias_exact(model)
        # the extreme-value form only exists for N >= 3; leave the cell blank
        asym = _fmt(bias_mod.bias_asymptotic(model)) if n >= 3 else ""
        sample = bias_mod.simulate_min_model(model, args.trials, seed=args.seed)
        se = float(np.std(sample, ddof=1) / math.sqrt(args.trials))
        rows.append({
            "N": str(n),
            "exact_bias": _fmt(exact),
            "asymptotic_bias": asym,
            "simulated_mean": _fmt(float(np.mean(sample))),
            "se": _fmt(se),
        })
    _emit(rows, ["N", "exact_bias", "asymptotic_bias", "simulated_mean", "se"],
          args.out, args.format)


def cmd_simulate(args) -> None:
    model = bias_mod.BiasModel(mu=args.mu, sigma=args.sigma, s=1, n_s=args.N)
    diag = bias_mod.gumbel_limit_diagnostic(model, args.trials, seed=args.seed)
    rows = [{"N": str(n), "simulated_mean": _fmt(mean), "se": _fmt(se),
             "ks_distance": ""} for n, mean, se in diag.drift]
    rows.append({"N": str(model.N), "simulated_mean": "", "se": "",
                 "ks_distance": _fmt(diag.ks_distance)})
    _emit(rows, ["N", "simulated_mean", "se", "ks_distance"],
          args.out, args.format)


def cmd_fixture(args) -> None:
    spec = ingest.FixtureSpec(
        label=args.label, n_pre=args.n_pre, n_post=args.n_post,
        drift_pre=args.drift_pre, drift_post=args.drift_post,
        vol_pre=args.vol_pre, vol_post=args.vol_post,
        frequency=Frequency(args.frequency),
    )
    ingest.make_fixture(args.seed, spec, path=args.out)


def _add_common(p: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        p.add_argument("--input", required=True, help="input CSV path")
    p.add_argument("--start-date", default="1980-01-01",
                   type=datetime.date.fromisoformat, dest="start_date")
    p.add_argument("--frequency", choices=["daily", "monthly"], default="daily")
    p.add_argument("--metric", choices=["sharpe", "sortino"], default="sharpe")
    p.add_argument("--mar", type=float, default=0.0,
                   help="minimum acceptable per-period return (sortino)")
    p.add_argument("--splits", type=int, default=1, dest="splits")
    p.add_argument("--min-segment", default="2y", dest="min_segment",
                   help="minimum segment length, e.g. 2y or 504p")
    p.add_argument("--lookback", default="40y")
    p.add_argument("--percent", action="store_true",
                   help="input values are percentages")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minregime",
        description="Minimum regime performance analytics")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("report", cmd_report), ("frontier", cmd_frontier),
                     ("correlations", cmd_correlations)):
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("sensitivity")
    _add_common(p)
    p.add_argument("--lookbacks", default="10:40:5y",
                   help="lookback grid in years, lo:hi:step or comma list")
    p.add_argument("--ds", default="1:5:1y",
                   help="minimum-segment grid in years")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("portfolio")
    _add_common(p)
    p.add_argument("--weights", required=True,
                   help="comma list of label=weight")
    p.set_defaults(func=cmd_portfolio)

    p = sub.add_parser("bias")
    _add_common(p, needs_input=False)
    p.add_argument("--N", type=lambda t: [int(x) for x in t.split(",")],
                   default=[1, 2, 5, 10, 100],
                   help="comma list of order-statistic counts")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100_000)
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("simulate")
    _add_common(p, needs_input=False)
    p.add_argument("--N", type=int, default=10_000)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=20_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fixture")
    _add_common(p, needs_input=False)
    p.add_argument("--label", default="synthetic")
    p.add_argument("--n-pre", type=int, default=252, dest="n_pre")
    p.add_argument("--n-post", type=int, default=252, dest="n_post")
    p.add_argument("--drift-pre", type=float, default=0.0008, dest="drift_pre")
    p.add_argument("--drift-post", type=float, default=-0.0008, dest="drift_post")
    p.add_argument("--vol-pre", type=float, default=0.01, dest="vol_pre")
    p.add_argument("--vol-post", type=float, default=0.01, dest="vol_post")
    p.set_defaults(func=cmd_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except MinRegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
