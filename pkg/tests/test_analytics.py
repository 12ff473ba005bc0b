import datetime
import json
import math

import numpy as np
import pytest

from minregime import (
    DateMismatch,
    DegenerateVector,
    Infeasible,
    InvalidBlock,
    PortfolioSpec,
    ReturnSeries,
    block_bootstrap_mrp,
    factor_report,
    frontier,
    mrp_brute_force,
    mrp_fast,
    portfolio_mrp,
    robustness_correlations,
    sensitivity_by_d,
    sensitivity_by_lookback,
    sensitivity_grid,
    series_metric,
)
from minregime.analytics import FactorReport, _trailing_window
from minregime.engine import mrp_one_split

from conftest import make_series, series_from


class TestFactorReport:
    def test_mrp_is_min_of_sides(self):
        s = make_series(600, seed=2)
        rep = factor_report(s, lookback_years=2.0, d_years=0.25)
        assert rep.mrp1 == min(rep.left_sr, rep.right_sr)

    def test_trailing_window_used(self):
        s = make_series(800, seed=3)
        rep = factor_report(s, lookback_years=1.0, d_years=0.25)
        win = _trailing_window(s, 1.0)
        assert len(win) == 252
        assert rep.full_sharpe == pytest.approx(series_metric(win))
        assert rep.mrp1 == mrp_one_split(win, 63).value

    def test_window_too_short(self):
        with pytest.raises(Infeasible):
            factor_report(make_series(100), lookback_years=1.0, d_years=1.0)

    def test_min_selection_bias(self):
        # stationary series: the split minimum sits below the full metric
        # in nearly all draws
        hits = 0
        trials = 200
        for seed in range(trials):
            s = make_series(260, seed=seed)
            rep = factor_report(s, lookback_years=1.0, d_years=0.2)
            hits += rep.mrp1 < rep.full_sharpe
        assert hits / trials >= 0.95


def _rep(label, sharpe, mrp):
    return FactorReport(label, sharpe, mrp, mrp, sharpe,
                        datetime.date(2000, 1, 1))


class TestFrontier:
    def test_single_point_not_dominated(self):
        pts = frontier([_rep("a", 0.5, -0.2)])
        assert not pts[0].dominated

    def test_definition(self):
        pts = frontier([_rep("a", 0.5, -0.2), _rep("b", 0.6, -0.1)])
        flags = {p.label: p.dominated for p in pts}
        assert flags == {"a": True, "b": False}

    def test_irreflexive_and_acyclic(self, rng):
        reports = [_rep(f"f{i}", rng.normal(), rng.normal()) for i in range(12)]
        pts = frontier(reports)
        best = max(pts, key=lambda p: (p.x, p.y))
        # a maximal point can never be dominated
        assert not any(p.dominated for p in pts
                       if p.x >= best.x and p.y >= best.y)

    def test_ties_not_dominated(self):
        pts = frontier([_rep("a", 0.5, -0.2), _rep("b", 0.5, -0.2)])
        assert not any(p.dominated for p in pts)


class TestSensitivityGrid:
    def test_infeasible_cells_marked(self):
        s = make_series(260, seed=1)  # just over one year of data
        grid = sensitivity_grid(s, lookbacks_years=[1.0], d_years=[0.25, 0.75])
        assert not math.isnan(grid.cells[0, 0])
        assert math.isnan(grid.cells[0, 1])  # 2*d > lookback

    def test_cells_match_recomputation(self):
        s = make_series(600, seed=4)
        grid = sensitivity_grid(s, lookbacks_years=[1.0, 2.0],
                                d_years=[0.2, 0.4])
        for i, lb in enumerate(grid.lookbacks_years):
            for j, dy in enumerate(grid.d_years):
                win = _trailing_window(s, lb)
                d = int(round(dy * 252))
                expected = (mrp_brute_force(win, 1, d).value
                            - series_metric(win))
                assert grid.cells[i, j] == pytest.approx(expected, abs=1e-12)

    def test_jobs_independent(self):
        s = make_series(400, seed=5)
        g1 = sensitivity_grid(s, [1.0, 1.5], [0.2, 0.3], jobs=1)
        g2 = sensitivity_grid(s, [1.0, 1.5], [0.2, 0.3], jobs=4)
        assert np.array_equal(g1.cells, g2.cells, equal_nan=True)

    def test_marginals(self):
        s = make_series(600, seed=6)
        grid = sensitivity_grid(s, [1.0, 2.0], [0.2, 0.4])
        by_lb = sensitivity_by_lookback([grid])
        by_d = sensitivity_by_d([grid])
        assert by_lb[1.0] == pytest.approx(np.nanmean(grid.cells[0, :]))
        assert by_d[0.4] == pytest.approx(np.nanmean(grid.cells[:, 1]))


class TestRobustnessCorrelations:
    def test_self_and_negation(self):
        v = [0.1, 0.5, -0.2, 0.3]
        names, corr = robustness_correlations(
            ["a", "b", "c", "d"], {"x": v, "y": v, "z": [-u for u in v]})
        assert corr[0, 1] == pytest.approx(1.0)
        assert corr[0, 2] == pytest.approx(-1.0)
        assert np.allclose(corr, corr.T)
        assert np.allclose(np.diag(corr), 1.0)

    def test_matches_direct_formula(self, rng):
        vecs = {k: rng.normal(size=8) for k in ("a", "b", "c")}
        labels = [f"f{i}" for i in range(8)]
        _, corr = robustness_correlations(labels, vecs)
        for i, ki in enumerate(vecs):
            for j, kj in enumerate(vecs):
                x, y = np.asarray(vecs[ki]), np.asarray(vecs[kj])
                expected = (np.mean((x - x.mean()) * (y - y.mean()))
                            / (x.std() * y.std()))
                assert corr[i, j] == pytest.approx(expected, abs=1e-12)

    def test_degenerate_vector(self):
        with pytest.raises(DegenerateVector):
            robustness_correlations(["a", "b", "c"],
                                    {"x": [1, 1, 1], "y": [1, 2, 3]})


class TestPortfolioMrp:
    def test_single_strategy_weight_one(self):
        s = make_series(60, seed=7)
        spec = PortfolioSpec((1.0,), (s,))
        direct = mrp_fast(s, 1, 10)
        combined = portfolio_mrp(spec, 1, 10)
        assert combined.value == pytest.approx(direct.value, abs=1e-12)
        assert combined.optimal_splits.splits == direct.optimal_splits.splits

    def test_two_identical_half_weights(self):
        s = make_series(60, seed=8)
        spec = PortfolioSpec((0.5, 0.5), (s, s))
        assert portfolio_mrp(spec, 1, 10).value == \
            pytest.approx(mrp_fast(s, 1, 10).value, abs=1e-12)

    def test_matches_pre_aggregated_brute_force(self, rng):
        a = make_series(50, seed=9, label="a")
        b = make_series(50, seed=10, label="b")
        w = (0.3, 0.7)
        spec = PortfolioSpec(w, (a, b))
        agg = series_from(w[0] * a.returns + w[1] * b.returns)
        assert portfolio_mrp(spec, 2, 5).value == \
            pytest.approx(mrp_brute_force(agg, 2, 5).value, abs=1e-12)

    def test_weight_scale_invariance(self):
        a = make_series(50, seed=11, label="a")
        b = make_series(50, seed=12, label="b")
        r1 = portfolio_mrp(PortfolioSpec((0.3, 0.7), (a, b)), 1, 10)
        r2 = portfolio_mrp(PortfolioSpec((3.0, 7.0), (a, b)), 1, 10)
        assert r2.value == pytest.approx(r1.value, rel=1e-12, abs=1e-12)
        assert r1.optimal_splits.splits == r2.optimal_splits.splits

    def test_alignment_inner_join(self):
        a = make_series(30, seed=13, label="a")
        # b covers a shifted range: only the overlap should be used
        b = ReturnSeries(dates=a.dates[10:] + tuple(
            a.dates[-1] + datetime.timedelta(days=i) for i in range(1, 11)),
            returns=make_series(30, seed=14).returns, label="b")
        spec = PortfolioSpec((0.5, 0.5), (a, b))
        agg = 0.5 * a.returns[10:] + 0.5 * b.returns[:20]
        expected = mrp_brute_force(series_from(agg), 1, 5).value
        assert portfolio_mrp(spec, 1, 5).value == pytest.approx(expected, abs=1e-12)

    def test_no_overlap(self):
        a = make_series(10, seed=15, label="a")
        b = ReturnSeries(
            dates=tuple(a.dates[-1] + datetime.timedelta(days=i)
                        for i in range(1, 11)),
            returns=make_series(10, seed=16).returns, label="b")
        with pytest.raises(DateMismatch):
            portfolio_mrp(PortfolioSpec((0.5, 0.5), (a, b)), 1, 2)

    def test_all_zero_weights_rejected(self):
        s = make_series(20, seed=17)
        with pytest.raises(ValueError):
            PortfolioSpec((0.0,), (s,))


class TestBlockBootstrap:
    def test_reproducible_single_replicate(self):
        s = make_series(120, seed=18)
        a = block_bootstrap_mrp(s, block_len=20, replicates=1, d=20, seed=5)
        b = block_bootstrap_mrp(s, block_len=20, replicates=1, d=20, seed=5)
        assert a.values[0] == b.values[0]

    def test_block_too_long(self):
        with pytest.raises(InvalidBlock):
            block_bootstrap_mrp(make_series(50), block_len=51, replicates=10)

    def test_jobs_independent(self):
        s = make_series(150, seed=19)
        a = block_bootstrap_mrp(s, 25, 16, d=25, seed=7, jobs=1)
        b = block_bootstrap_mrp(s, 25, 16, d=25, seed=7, jobs=4)
        assert np.array_equal(a.values, b.values)

    def test_mean_matches_fresh_series_simulation(self):
        # i.i.d. input: bootstrap replicates and fresh draws share the MRP
        # law up to the empirical-distribution plug-in, so compare at the
        # scale of the fresh-series MRP spread
        mu, sigma, n, d = 0.0005, 0.01, 252, 63
        s = make_series(n, seed=20, mu=mu, sigma=sigma)
        boot = block_bootstrap_mrp(s, block_len=63, replicates=120, d=d, seed=1)
        fresh = [mrp_fast(make_series(n, seed=500 + i, mu=mu, sigma=sigma),
                          1, d).value for i in range(120)]
        fresh = np.asarray(fresh)
        assert abs(boot.mean - fresh.mean()) <= 3 * fresh.std(ddof=1)

    def test_envelope_contains_original(self):
        hits = 0
        for seed in range(30):
            s = make_series(120, seed=700 + seed)
            original = mrp_fast(s, 1, 20).value
            boot = block_bootstrap_mrp(s, 15, 60, d=20, seed=seed)
            hits += boot.values.min() <= original <= boot.values.max()
        assert hits / 30 >= 0.9

    def test_summary_fields(self):
        s = make_series(100, seed=21)
        boot = block_bootstrap_mrp(s, 10, 40, d=15, seed=2)
        assert boot.values.shape == (40,)
        assert boot.quantiles[0.05] <= boot.quantiles[0.5] <= boot.quantiles[0.95]
        assert boot.mean == pytest.approx(boot.values.mean())
