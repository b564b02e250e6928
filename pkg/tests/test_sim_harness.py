import numpy as np
import pytest

from levyhedge import (
    GeometricBernoulliSpec,
    LevyMeasure,
    Scenario,
    TimeGrid,
    brute_force_constant_hedge,
    builtin_scenario,
    run_scenario,
    scenario_ratios,
    single_coefficients,
    two_asset_hedge,
)
from levyhedge.sim_harness import with_overrides

SEED = 333


# ---------------------------------------------------------------- scenario definitions


def test_builtin_market_parameters():
    s = builtin_scenario("fig1")
    assert s.measure.locations.tolist() == [1.0, -1.0]
    assert s.measure.intensities.tolist() == [7.5, 7.5]
    assert s.measure.total_intensity == 15.0
    assert s.grid.horizon == 1.0 and s.grid.steps == 1000
    assert s.contract == GeometricBernoulliSpec(100.0, 0.15, 0.25)
    assert s.hedging_assets == (
        GeometricBernoulliSpec(100.0, 0.20, 0.30),
        GeometricBernoulliSpec(100.0, 0.10, 0.20),
    )
    assert s.hedge_mode == "none"
    assert s.kernel is None


def test_builtin_hedge_modes():
    assert builtin_scenario("fig2a").hedge_mode == "single"
    assert builtin_scenario("fig2a").hedge_asset_index == 0
    assert builtin_scenario("fig2b").hedge_asset_index == 1
    assert builtin_scenario("fig3").hedge_mode == "two_asset"


def test_fig4_reduces_brownian_vols_only():
    s3, s4 = builtin_scenario("fig3"), builtin_scenario("fig4")
    assert s4.contract == GeometricBernoulliSpec(100.0, 0.002, 0.25)
    assert [a.brownian_vol for a in s4.hedging_assets] == [0.003, 0.001]
    assert [a.jump_exponent for a in s4.hedging_assets] == [a.jump_exponent for a in s3.hedging_assets]
    assert s4.hedge_mode == "two_asset"


def test_unknown_scenario_name():
    with pytest.raises(ValueError):
        builtin_scenario("fig9")


def test_scenario_validation(bern_measure):
    contract = GeometricBernoulliSpec(100.0, 0.1, 0.2)
    asset = GeometricBernoulliSpec(100.0, 0.2, 0.3)
    grid = TimeGrid(1.0, 10)
    with pytest.raises(ValueError):
        Scenario(bern_measure, contract, (asset,), grid, 10, SEED, "two_asset")
    with pytest.raises(ValueError):
        Scenario(bern_measure, contract, (asset,), grid, 10, SEED, "single", hedge_asset_index=3)
    with pytest.raises(ValueError):
        Scenario(bern_measure, contract, (asset,), grid, 0, SEED, "none")
    with pytest.raises(ValueError):
        Scenario(bern_measure, contract, (asset,), grid, 10, SEED, "sideways")


def test_with_overrides():
    s = with_overrides(builtin_scenario("fig3"), n_paths=7, seed=99, steps=50)
    assert (s.n_paths, s.seed, s.grid.steps) == (7, 99, 50)
    assert s.grid.horizon == 1.0


# ---------------------------------------------------------------- ratios


def test_single_mode_ratio_matches_coefficients(bern_measure, contract, asset_high):
    co = single_coefficients(contract, asset_high, bern_measure)
    ratios = scenario_ratios(builtin_scenario("fig2a"))
    assert ratios[0] == pytest.approx(co.L / co.M, rel=1e-14)
    assert ratios[1] == 0.0


def test_two_asset_mode_matches_closed_form(bern_measure, contract, asset_high, asset_low):
    phi = two_asset_hedge(contract, asset_high, asset_low, (100.0, 100.0, 100.0), bern_measure)
    ratios = scenario_ratios(builtin_scenario("fig3"))
    assert ratios[0] == pytest.approx(phi[0] * 100.0 / 100.0, rel=1e-13)
    assert ratios[1] == pytest.approx(phi[1] * 100.0 / 100.0, rel=1e-13)


def test_multi_mode_agrees_with_two_asset(bern_measure):
    from dataclasses import replace

    s = replace(builtin_scenario("fig3"), hedge_mode="multi")
    np.testing.assert_allclose(scenario_ratios(s), scenario_ratios(builtin_scenario("fig3")), atol=1e-10)


def test_no_hedge_mode_has_no_ratios():
    assert scenario_ratios(builtin_scenario("fig1")) is None


# ---------------------------------------------------------------- running


def test_run_scenario_is_deterministic():
    s = builtin_scenario("fig3", n_paths=5, seed=SEED)
    a, b = run_scenario(s), run_scenario(s)
    assert a.aggregate == b.aggregate
    assert a.path_summaries == b.path_summaries
    np.testing.assert_array_equal(a.golden.contract_values, b.golden.contract_values)
    np.testing.assert_array_equal(a.golden.phi, b.golden.phi)


def test_hedge_mode_does_not_change_the_prices():
    base = builtin_scenario("fig1", n_paths=2, seed=SEED)
    hedged = builtin_scenario("fig3", n_paths=2, seed=SEED)
    a, b = run_scenario(base), run_scenario(hedged)
    np.testing.assert_array_equal(a.golden.contract_values, b.golden.contract_values)
    np.testing.assert_array_equal(a.golden.asset_values, b.golden.asset_values)
    np.testing.assert_array_equal(a.golden.jump_count_path, b.golden.jump_count_path)


def test_no_hedge_portfolio_tracks_contract():
    r = run_scenario(builtin_scenario("fig1", n_paths=1, seed=SEED))
    np.testing.assert_allclose(r.golden.portfolio_values, r.golden.contract_values, atol=1e-12)
    assert r.delta_analytic is None and r.rho is None


def test_two_asset_hedge_cuts_residual_variance():
    n = 200
    r2a = run_scenario(builtin_scenario("fig2a", n_paths=n, seed=SEED))
    r2b = run_scenario(builtin_scenario("fig2b", n_paths=n, seed=SEED))
    r3 = run_scenario(builtin_scenario("fig3", n_paths=n, seed=SEED))
    assert r3.aggregate.residual_std < r2a.aggregate.residual_std
    assert r3.aggregate.residual_std < r2b.aggregate.residual_std
    # analytic ordering is strict as well
    assert r3.delta_analytic < min(r2a.delta_analytic, r2b.delta_analytic)


def test_reduced_brownian_vols_give_near_perfect_hedge():
    n = 100
    r3 = run_scenario(builtin_scenario("fig3", n_paths=n, seed=SEED))
    r4 = run_scenario(builtin_scenario("fig4", n_paths=n, seed=SEED))
    assert r4.aggregate.residual_std <= 0.1 * r3.aggregate.residual_std


def test_aggregate_consistent_with_path_summaries():
    r = run_scenario(builtin_scenario("fig2a", n_paths=20, seed=SEED))
    assert r.aggregate.mean_delta == pytest.approx(
        np.mean([p.delta_terminal for p in r.path_summaries]), rel=1e-12
    )
    assert r.aggregate.max_abs_residual == max(p.max_abs_residual for p in r.path_summaries)


# ---------------------------------------------------------------- brute force


def test_sweep_matches_single_asset_closed_form(bern_measure, contract, asset_high):
    co = single_coefficients(contract, asset_high, bern_measure)
    result = brute_force_constant_hedge(builtin_scenario("fig2a"), 0.0, 2.0, 1e-3)
    assert abs(result.best_ratios[0] - co.L / co.M) <= 1e-3
    assert result.best_ratios[1] == 0.0
    assert result.deltas.shape == result.axes[0].shape
    assert result.best_delta == result.deltas.min()


def test_sweep_matches_two_asset_closed_form():
    s = builtin_scenario("fig3")
    ratios = scenario_ratios(s)
    result = brute_force_constant_hedge(s, 0.0, 1.0, 1e-3)
    assert abs(result.best_ratios[0] - ratios[0]) <= 1e-3
    assert abs(result.best_ratios[1] - ratios[1]) <= 1e-3
    assert result.deltas.shape == (len(result.axes[0]), len(result.axes[1]))


def test_sweep_brownian_only_market():
    measure = LevyMeasure()
    s = Scenario(
        measure=measure,
        contract=GeometricBernoulliSpec(100.0, 0.15, 0.0),
        hedging_assets=(GeometricBernoulliSpec(100.0, 0.20, 0.0),),
        grid=TimeGrid(1.0, 100),
        n_paths=1,
        seed=SEED,
        hedge_mode="single",
    )
    result = brute_force_constant_hedge(s, 0.0, 2.0, 1e-3)
    assert abs(result.best_ratios[0] - 0.15 / 0.20) <= 1e-3


def test_sweep_requires_hedging_mode():
    with pytest.raises(ValueError):
        brute_force_constant_hedge(builtin_scenario("fig1"), 0.0, 1.0)
