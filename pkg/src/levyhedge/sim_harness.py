"""Scenario definitions, Monte Carlo drivers, and brute-force hedge search.

The built-in scenarios are a Bernoulli jump-diffusion market: one contract
asset and two hedging assets, all geometric and driven by the same Brownian
motion and the same two-atom jump measure (marks +1/-1, total rate 15,
equal odds).  Everything is expressed in benchmark units, so the scenarios
carry no pricing kernel.  One master seed makes every run reproducible; the
reporting path (path_index 0) is retained in full for CSV emission.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .levy_core import LevyMeasure, NoiseRealization, TimeGrid, sample_noise
from .market import AssetSpec, GeometricBernoulliSpec, PricingKernelSpec, geometric_price_path
from .hedging import (
    ConstantRatioRule,
    HedgeReport,
    analytic_delta,
    evolve_portfolio,
    gram_system,
    multi_asset_hedge,
    rho_diagnostic,
    single_asset_hedge,
    single_coefficients,
    two_asset_hedge,
    volatility_inner,
)

__all__ = [
    "HEDGE_MODES",
    "DEFAULT_SEED",
    "Scenario",
    "PathSummary",
    "ScenarioAggregate",
    "GoldenPath",
    "ScenarioResult",
    "BruteForceResult",
    "builtin_scenario",
    "scenario_ratios",
    "run_scenario",
    "brute_force_constant_hedge",
]

HEDGE_MODES = ("none", "single", "two_asset", "multi")
DEFAULT_SEED = 1729
FIGURE_NAMES = ("fig1", "fig2a", "fig2b", "fig3", "fig4")


@dataclass(frozen=True)
class Scenario:
    """One reproducible experiment: market, contract, assets, grid, hedge mode.

    Asset specs are in benchmark units (hedging needs only the driftless
    natural dynamics); an attached kernel is carried for kernel-level
    diagnostics and does not alter the hedge experiment.
    """

    measure: LevyMeasure
    contract: GeometricBernoulliSpec
    hedging_assets: tuple[GeometricBernoulliSpec, ...]
    grid: TimeGrid
    n_paths: int
    seed: int
    hedge_mode: str
    hedge_asset_index: int = 0
    kernel: PricingKernelSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "hedging_assets", tuple(self.hedging_assets))
        if self.hedge_mode not in HEDGE_MODES:
            raise ValueError(f"unknown hedge_mode {self.hedge_mode!r}")
        if self.n_paths < 1:
            raise ValueError("n_paths must be positive")
        n = len(self.hedging_assets)
        if self.hedge_mode == "single" and not 0 <= self.hedge_asset_index < n:
            raise ValueError("single mode needs a valid hedge_asset_index")
        if self.hedge_mode == "two_asset" and n < 2:
            raise ValueError("two_asset mode needs at least two hedging assets")
        if self.hedge_mode == "multi" and n < 1:
            raise ValueError("multi mode needs at least one hedging asset")

    def natural_contract(self) -> AssetSpec:
        return self.contract.to_asset_spec(self.measure)

    def natural_assets(self) -> tuple[AssetSpec, ...]:
        return tuple(a.to_asset_spec(self.measure) for a in self.hedging_assets)


@dataclass(frozen=True)
class PathSummary:
    """Per-path hedge outcome; what the per-path CSV rows carry.

    ``delta_integrated`` and ``residual_sum`` are the per-path second and
    first moments of the residual increments, so pooled aggregates can be
    recomputed exactly from the emitted rows.
    """

    path_index: int
    delta_terminal: float
    delta_integrated: float
    delta_normalized: float
    residual_sum: float
    per_step_std: float
    max_abs_residual: float


@dataclass(frozen=True)
class ScenarioAggregate:
    mean_delta: float
    mean_delta_integrated: float
    mean_delta_normalized: float
    residual_std: float
    max_abs_residual: float


@dataclass(frozen=True, eq=False)
class GoldenPath:
    """Full arrays for the reporting path (path_index 0)."""

    times: np.ndarray
    jump_count_path: np.ndarray
    jump_sum_path: np.ndarray
    contract_values: np.ndarray
    asset_values: np.ndarray  # (steps + 1, n_assets)
    phi: np.ndarray  # (steps, n_assets)
    theta: np.ndarray  # (steps,)
    portfolio_values: np.ndarray
    residuals: np.ndarray  # (steps,)


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    scenario: Scenario
    ratios: tuple[float, ...] | None
    delta_analytic: float | None
    rho: float | None
    path_summaries: tuple[PathSummary, ...]
    aggregate: ScenarioAggregate
    golden: GoldenPath


@dataclass(frozen=True, eq=False)
class BruteForceResult:
    best_ratios: tuple[float, ...]
    best_delta: float
    axes: tuple[np.ndarray, ...]
    deltas: np.ndarray


_BASE_CONTRACT = GeometricBernoulliSpec(100.0, 0.15, 0.25)
_BASE_ASSETS = (
    GeometricBernoulliSpec(100.0, 0.20, 0.30),
    GeometricBernoulliSpec(100.0, 0.10, 0.20),
)
_SMALL_CONTRACT = GeometricBernoulliSpec(100.0, 0.002, 0.25)
_SMALL_ASSETS = (
    GeometricBernoulliSpec(100.0, 0.003, 0.30),
    GeometricBernoulliSpec(100.0, 0.001, 0.20),
)


def builtin_scenario(name: str, *, n_paths: int = 1000, seed: int = DEFAULT_SEED) -> Scenario:
    """Named Bernoulli jump-diffusion scenarios.

    fig1   no hedge (path display);
    fig2a  single-asset hedge with the high-volatility asset;
    fig2b  single-asset hedge with the low-volatility asset;
    fig3   two-asset hedge;
    fig4   two-asset hedge with Brownian volatilities reduced to
           (0.003, 0.001) and 0.002 for the contract.
    """
    common = dict(
        measure=LevyMeasure.bernoulli(rate=15.0, up_prob=0.5, up=1.0, down=-1.0),
        grid=TimeGrid(horizon=1.0, steps=1000),
        n_paths=n_paths,
        seed=seed,
    )
    if name == "fig1":
        return Scenario(contract=_BASE_CONTRACT, hedging_assets=_BASE_ASSETS, hedge_mode="none", **common)
    if name == "fig2a":
        return Scenario(
            contract=_BASE_CONTRACT, hedging_assets=_BASE_ASSETS, hedge_mode="single", hedge_asset_index=0, **common
        )
    if name == "fig2b":
        return Scenario(
            contract=_BASE_CONTRACT, hedging_assets=_BASE_ASSETS, hedge_mode="single", hedge_asset_index=1, **common
        )
    if name == "fig3":
        return Scenario(contract=_BASE_CONTRACT, hedging_assets=_BASE_ASSETS, hedge_mode="two_asset", **common)
    if name == "fig4":
        return Scenario(contract=_SMALL_CONTRACT, hedging_assets=_SMALL_ASSETS, hedge_mode="two_asset", **common)
    raise ValueError(f"unknown scenario name {name!r}; expected one of {FIGURE_NAMES}")


def scenario_ratios(s: Scenario) -> tuple[float, ...] | None:
    """Optimal constant scaled ratios psi_i = phi^i S^i / C for the scenario's mode.

    Returns one entry per hedging asset (zero for assets the mode does not
    trade), or None in no-hedge mode.  Constant specs make the optimal
    scaled ratios time-independent, so they are computed once at t = 0.
    """
    if s.hedge_mode == "none":
        return None
    contract = s.natural_contract()
    assets = s.natural_assets()
    ratios = np.zeros(len(assets))
    if s.hedge_mode == "single":
        co = single_coefficients(contract, assets[s.hedge_asset_index], s.measure)
        ratios[s.hedge_asset_index] = single_asset_hedge(1.0, 1.0, co)
    elif s.hedge_mode == "two_asset":
        c0 = contract.initial_price
        s10, s20 = assets[0].initial_price, assets[1].initial_price
        phi1, phi2 = two_asset_hedge(contract, assets[0], assets[1], (c0, s10, s20), s.measure)
        ratios[0] = phi1 * s10 / c0
        ratios[1] = phi2 * s20 / c0
    else:  # multi
        prices = np.array([a.initial_price for a in assets])
        system = gram_system(contract, assets, contract.initial_price, prices, s.measure)
        phi = multi_asset_hedge(system)
        ratios = phi * prices / contract.initial_price
    return tuple(float(r) for r in ratios)


def _evolve_one(
    s: Scenario,
    noise: NoiseRealization,
    ratios: tuple[float, ...] | None,
    delta_analytic: float | None,
    rho: float | None,
) -> tuple[HedgeReport, np.ndarray, np.ndarray]:
    contract_path = geometric_price_path(s.natural_contract(), s.measure, noise, s.grid)
    asset_paths = [geometric_price_path(a, s.measure, noise, s.grid) for a in s.natural_assets()]
    rule = ConstantRatioRule(ratios) if ratios is not None else None
    report = evolve_portfolio(
        contract_path, asset_paths, rule, s.grid, delta_analytic=delta_analytic, rho=rho
    )
    assets = np.stack([p.values for p in asset_paths], axis=1) if asset_paths else np.zeros((s.grid.steps + 1, 0))
    return report, contract_path.values, assets


def run_scenario(s: Scenario) -> ScenarioResult:
    """Simulate all scenario paths with shared-noise discipline and aggregate.

    Every asset on a path consumes the same noise realization; the hedge
    mode never alters the simulated prices.  Deterministic in the seed and
    independent of execution order (paths are accumulated serially).
    """
    ratios = scenario_ratios(s)
    d_analytic = (
        analytic_delta(s.natural_contract(), s.natural_assets(), ratios, s.measure, s.grid.horizon)
        if ratios is not None
        else None
    )
    rho = (
        # clamp: rounding can land an epsilon above the Cauchy-Schwarz bound
        min(rho_diagnostic(s.natural_contract(), s.natural_assets()[s.hedge_asset_index], s.measure), 1.0)
        if s.hedge_mode == "single"
        else None
    )

    summaries = []
    golden = None
    resid_sum = 0.0
    resid_sumsq = 0.0
    resid_count = 0
    max_abs = 0.0
    c0 = s.contract.initial_price
    for path_index in range(s.n_paths):
        noise = sample_noise(s.measure, s.grid, s.seed, path_index)
        report, c_values, a_values = _evolve_one(s, noise, ratios, d_analytic, rho)
        dv = report.residual_increments
        c_left = c_values[:-1]
        summaries.append(
            PathSummary(
                path_index=path_index,
                delta_terminal=report.delta_mc,
                delta_integrated=float(dv @ dv),
                delta_normalized=float(c0 * c0 * ((dv / c_left) @ (dv / c_left))),
                residual_sum=float(dv.sum()),
                per_step_std=report.per_step_std,
                max_abs_residual=report.max_abs_residual,
            )
        )
        resid_sum += float(dv.sum())
        resid_sumsq += float(dv @ dv)
        resid_count += dv.size
        max_abs = max(max_abs, report.max_abs_residual)
        if path_index == 0:
            golden = GoldenPath(
                times=s.grid.times,
                jump_count_path=noise.cumulative_jump_count(),
                jump_sum_path=noise.cumulative_jump_sum(),
                contract_values=c_values,
                asset_values=a_values,
                phi=report.strategy.phi,
                theta=report.strategy.theta,
                portfolio_values=report.portfolio_path.values,
                residuals=dv,
            )

    mean = resid_sum / resid_count
    aggregate = ScenarioAggregate(
        mean_delta=float(np.mean([p.delta_terminal for p in summaries])),
        mean_delta_integrated=float(np.mean([p.delta_integrated for p in summaries])),
        mean_delta_normalized=float(np.mean([p.delta_normalized for p in summaries])),
        residual_std=float(np.sqrt(max(resid_sumsq / resid_count - mean * mean, 0.0))),
        max_abs_residual=max_abs,
    )
    return ScenarioResult(
        scenario=s,
        ratios=ratios,
        delta_analytic=d_analytic,
        rho=rho,
        path_summaries=tuple(summaries),
        aggregate=aggregate,
        golden=golden,
    )


def _ratio_axis(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(count)


def brute_force_constant_hedge(
    s: Scenario, ratio_min: float, ratio_max: float, step: float = 1e-3
) -> BruteForceResult:
    """Exhaustive sweep of the closed-form error over constant scaled ratios.

    Single mode sweeps the traded asset's ratio over [ratio_min, ratio_max];
    two-asset mode sweeps the same range on both axes.  This is the
    independent check that the closed-form hedges sit at the minimum: no
    solver output enters the sweep.
    """
    if s.hedge_mode not in ("single", "two_asset"):
        raise ValueError("brute force sweep needs hedge_mode 'single' or 'two_asset'")
    contract = s.natural_contract()
    assets = s.natural_assets()
    horizon = s.grid.horizon
    scale = horizon * contract.initial_price**2
    k = volatility_inner(contract, contract, s.measure)

    if s.hedge_mode == "single":
        a = assets[s.hedge_asset_index]
        l = volatility_inner(a, contract, s.measure)
        m = volatility_inner(a, a, s.measure)
        axis = _ratio_axis(ratio_min, ratio_max, step)
        deltas = scale * (k - 2.0 * axis * l + axis**2 * m)
        best = int(np.argmin(deltas))
        ratios = np.zeros(len(assets))
        ratios[s.hedge_asset_index] = axis[best]
        return BruteForceResult(tuple(ratios), float(deltas[best]), (axis,), deltas)

    a1, a2 = assets[0], assets[1]
    l1 = volatility_inner(a1, contract, s.measure)
    l2 = volatility_inner(a2, contract, s.measure)
    v11 = volatility_inner(a1, a1, s.measure)
    v22 = volatility_inner(a2, a2, s.measure)
    v12 = volatility_inner(a1, a2, s.measure)
    ax1 = _ratio_axis(ratio_min, ratio_max, step)
    ax2 = _ratio_axis(ratio_min, ratio_max, step)
    p1 = ax1[:, None]
    p2 = ax2[None, :]
    deltas = scale * (
        k - 2.0 * (p1 * l1 + p2 * l2) + p1**2 * v11 + 2.0 * p1 * p2 * v12 + p2**2 * v22
    )
    flat = int(np.argmin(deltas))
    i, j = np.unravel_index(flat, deltas.shape)
    ratios = np.zeros(len(assets))
    ratios[0], ratios[1] = ax1[i], ax2[j]
    return BruteForceResult(tuple(ratios), float(deltas[i, j]), (ax1, ax2), deltas)


def with_overrides(
    s: Scenario,
    *,
    n_paths: int | None = None,
    seed: int | None = None,
    steps: int | None = None,
) -> Scenario:
    """Scenario copy with CLI-style overrides applied."""
    out = s
    if n_paths is not None:
        out = replace(out, n_paths=n_paths)
    if seed is not None:
        out = replace(out, seed=seed)
    if steps is not None:
        out = replace(out, grid=TimeGrid(out.grid.horizon, steps))
    return out
