"""Named property suites: Monte Carlo and algebraic checks of the library.

Each suite returns a list of :class:`CheckResult` with a measured-statistic
detail string; the CLI prints one line per check and the acceptance tests
assert on the same functions.  Monte Carlo assertions use 3-standard-error
bands; algebraic identities are held to 1e-10 or 1e-12 as noted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .levy_core import (
    LevyMeasure,
    JumpAtom,
    SymmetricCoefficients,
    TimeGrid,
    NoiseRealization,
    compensate,
    exponential_path,
    integrate,
    integrate_proportional,
    product_coefficients,
    quotient_coefficients,
    sample_noise,
)
from .market import (
    AssetSpec,
    PricingKernelSpec,
    benchmark_coefficients,
    geometric_price_path,
    kernel_path,
    natural_coefficients,
)
from .hedging import (
    ConstantRatioRule,
    analytic_delta,
    evolve_portfolio,
    gram_system,
    multi_asset_hedge,
    rho_diagnostic,
    single_coefficients,
    two_asset_hedge,
)
from .sim_harness import DEFAULT_SEED, builtin_scenario, brute_force_constant_hedge, scenario_ratios

__all__ = ["CheckResult", "SUITE_NAMES", "run_suite"]

SUITE_NAMES = ("isometry", "martingale", "calculus", "optimality", "ordering", "completeness")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name, bool(passed), detail)


def _fig_measure() -> LevyMeasure:
    return LevyMeasure.bernoulli(rate=15.0, up_prob=0.5, up=1.0, down=-1.0)


def _fig_assets() -> tuple[AssetSpec, AssetSpec, AssetSpec]:
    """Natural-unit contract and two hedging assets of the built-in market."""
    measure = _fig_measure()
    c = builtin_scenario("fig1").contract.to_asset_spec(measure)
    a1, a2 = (g.to_asset_spec(measure) for g in builtin_scenario("fig1").hedging_assets)
    return c, a1, a2


# ----------------------------------------------------------------------------
# isometry


def suite_isometry(seed: int = DEFAULT_SEED, n_paths: int = 10_000) -> list[CheckResult]:
    """E[(X_T - X_0)^2] of driftless integration equals T (beta^2 + sum gamma^2 w)."""
    results = []
    measure = _fig_measure()
    grid = TimeGrid(1.0, 1000)
    cases = [
        ("isometry jump-diffusion driver", measure, SymmetricCoefficients(0.0, 0.20, (0.3, -0.3), measure)),
        ("isometry brownian only", LevyMeasure(), SymmetricCoefficients(0.0, 1.0, (), LevyMeasure())),
    ]
    for name, m, coeffs in cases:
        analytic = grid.horizon * (
            coeffs.brownian_vol**2 + compensate(m, coeffs.jump_vol_array**2)
        )
        sq = np.empty(n_paths)
        for p in range(n_paths):
            noise = sample_noise(m, grid, seed, p)
            path = integrate(coeffs, noise, 0.0)
            sq[p] = (path.terminal - path.initial) ** 2
        mc = float(sq.mean())
        se = float(sq.std(ddof=1) / np.sqrt(n_paths))
        results.append(
            _check(
                name,
                abs(mc - analytic) <= 3.0 * se,
                f"mc={mc:.6g} analytic={analytic:.6g} |diff|={abs(mc - analytic):.3g} 3se={3 * se:.3g} N={n_paths}",
            )
        )
    return results


# ----------------------------------------------------------------------------
# martingale


def suite_martingale(seed: int = DEFAULT_SEED, n_paths: int = 10_000) -> list[CheckResult]:
    """Natural prices and driftless integrals keep their initial mean."""
    results = []
    measure = _fig_measure()
    grid = TimeGrid(1.0, 1000)
    contract, a1, a2 = _fig_assets()
    specs = [("contract", contract), ("asset 1", a1), ("asset 2", a2)]
    terminals = np.empty((n_paths, len(specs)))
    for p in range(n_paths):
        noise = sample_noise(measure, grid, seed, p)
        for j, (_, spec) in enumerate(specs):
            terminals[p, j] = geometric_price_path(spec, measure, noise, grid).terminal
    for j, (label, spec) in enumerate(specs):
        mean = float(terminals[:, j].mean())
        se = float(terminals[:, j].std(ddof=1) / np.sqrt(n_paths))
        results.append(
            _check(
                f"natural price martingale ({label})",
                abs(mean - spec.initial_price) <= 3.0 * se,
                f"mean={mean:.4f} S0={spec.initial_price} 3se={3 * se:.4f} N={n_paths}",
            )
        )

    coeffs = SymmetricCoefficients(0.0, 0.4, (0.2, -0.1), measure)
    x = np.empty(n_paths)
    for p in range(n_paths):
        x[p] = integrate(coeffs, sample_noise(measure, grid, seed + 1, p), 3.0).terminal
    mean = float(x.mean())
    se = float(x.std(ddof=1) / np.sqrt(n_paths))
    results.append(
        _check(
            "driftless integration keeps its mean",
            abs(mean - 3.0) <= 3.0 * se,
            f"mean={mean:.5f} x0=3 3se={3 * se:.5f} N={n_paths}",
        )
    )
    return results


# ----------------------------------------------------------------------------
# calculus


def _random_coefficients(rng: np.random.Generator, measure: LevyMeasure) -> SymmetricCoefficients:
    gam = rng.uniform(-0.6, 1.5, len(measure))
    return SymmetricCoefficients(rng.uniform(-0.3, 0.3), rng.uniform(-0.5, 0.5), tuple(gam), measure)


def _coarsen(noise: NoiseRealization) -> NoiseRealization:
    """Merge adjacent steps: valid noise for the grid with half the steps."""
    grid = noise.grid
    if grid.steps % 2:
        raise ValueError("need an even number of steps to coarsen")
    return NoiseRealization(
        noise.measure,
        TimeGrid(grid.horizon, grid.steps // 2),
        noise.brownian_increments.reshape(-1, 2).sum(axis=1),
        noise.jump_counts.reshape(-1, 2, len(noise.measure)).sum(axis=1),
    )


def suite_calculus(seed: int = DEFAULT_SEED, n_paths: int = 100) -> list[CheckResult]:
    """Product/quotient coefficient transforms against pathwise oracles."""
    results = []
    rng = np.random.default_rng(seed)
    measure = _fig_measure()
    grid = TimeGrid(1.0, 1000)

    # closed-form identity: path of the product/quotient coefficients equals
    # the pointwise product/quotient of the individual closed-form paths
    # (relative error; the paths themselves range over orders of magnitude).
    worst_prod = worst_quot = 0.0
    for trial in range(20):
        a = _random_coefficients(rng, measure)
        b = _random_coefficients(rng, measure)
        noise = sample_noise(measure, grid, seed + 2, trial)
        xa = exponential_path(a, noise, 1.3)
        xb = exponential_path(b, noise, 0.7)
        xp = exponential_path(product_coefficients(a, b), noise, 1.3 * 0.7)
        xq = exponential_path(quotient_coefficients(a, b), noise, 1.3 / 0.7)
        prod_ref = xa.values * xb.values
        quot_ref = xa.values / xb.values
        worst_prod = max(worst_prod, float(np.abs(xp.values / prod_ref - 1.0).max()))
        worst_quot = max(worst_quot, float(np.abs(xq.values / quot_ref - 1.0).max()))
    results.append(
        _check("closed-form product identity", worst_prod <= 1e-10, f"max rel err={worst_prod:.3g} tol=1e-10")
    )
    results.append(
        _check("closed-form quotient identity", worst_quot <= 1e-10, f"max rel err={worst_quot:.3g} tol=1e-10")
    )

    # algebraic inverse: product(quotient(a, b), b) == a
    worst = 0.0
    for _ in range(50):
        a = _random_coefficients(rng, measure)
        b = _random_coefficients(rng, measure)
        back = product_coefficients(quotient_coefficients(a, b), b)
        worst = max(
            worst,
            abs(back.drift - a.drift),
            abs(back.brownian_vol - a.brownian_vol),
            float(np.abs(back.jump_vol_array - a.jump_vol_array).max()),
        )
    results.append(_check("quotient/product round trip", worst <= 1e-12, f"max|diff|={worst:.3g} tol=1e-12"))

    # Euler halving: pure-jump coefficients converge at first order, so the
    # median sup-norm discrepancy (vs. the closed form, and vs. the product
    # of Euler paths) halves when dt halves.  Brownian-bearing coefficients
    # carry an O(sqrt dt) component, asserted only to shrink.
    def euler_gap(beta1: float, beta2: float) -> tuple[float, float]:
        a = SymmetricCoefficients(0.02, beta1, tuple(np.expm1(0.3 * measure.locations)), measure)
        b = SymmetricCoefficients(-0.01, beta2, tuple(np.expm1(0.2 * measure.locations)), measure)
        ab = product_coefficients(a, b)
        ratios_cf = np.empty(n_paths)
        ratios_prod = np.empty(n_paths)
        for p in range(n_paths):
            fine = sample_noise(measure, TimeGrid(1.0, 2000), seed + 3, p)
            coarse = _coarsen(fine)
            gaps_cf = []
            gaps_prod = []
            for noise in (coarse, fine):
                e_a = integrate_proportional(a, noise, 1.0)
                e_b = integrate_proportional(b, noise, 1.0)
                e_ab = integrate_proportional(ab, noise, 1.0)
                cf = exponential_path(a, noise, 1.0)
                gaps_cf.append(float(np.abs(e_a.values - cf.values).max()))
                gaps_prod.append(float(np.abs(e_ab.values - e_a.values * e_b.values).max()))
            ratios_cf[p] = gaps_cf[1] / gaps_cf[0]
            ratios_prod[p] = gaps_prod[1] / gaps_prod[0]
        return float(np.median(ratios_cf)), float(np.median(ratios_prod))

    r_cf, r_prod = euler_gap(0.0, 0.0)
    results.append(
        _check(
            "euler-vs-closed-form error halves with dt (pure jump)",
            r_cf <= 0.55,
            f"median ratio={r_cf:.4f} bound=0.55 paths={n_paths}",
        )
    )
    results.append(
        _check(
            "euler product-path error halves with dt (pure jump)",
            r_prod <= 0.55,
            f"median ratio={r_prod:.4f} bound=0.55 paths={n_paths}",
        )
    )
    r_cf_mix, r_prod_mix = euler_gap(0.15, 0.10)
    results.append(
        _check(
            "euler error shrinks with dt (with brownian part)",
            r_cf_mix < 0.95 and r_prod_mix < 0.95,
            f"median ratios=({r_cf_mix:.3f}, {r_prod_mix:.3f}) bound=0.95",
        )
    )

    # kernel-benchmark reciprocal identity on random kernel specs
    worst = 0.0
    for trial in range(100):
        n_atoms = int(rng.integers(0, 4))
        locs = np.unique(rng.normal(0.0, 1.0, n_atoms))
        m = LevyMeasure(
            tuple(JumpAtom(float(x), float(w)) for x, w in zip(locs, rng.uniform(0.2, 10.0, len(locs))))
        )
        kernel = PricingKernelSpec(
            float(rng.uniform(0.0, 0.1)),
            float(rng.uniform(-0.5, 0.5)),
            tuple(rng.uniform(-0.5, 0.9, len(m))),
        )
        sgrid = TimeGrid(1.0, 500)
        noise = sample_noise(m, sgrid, seed + 4, trial)
        pi = kernel_path(kernel, m, noise, sgrid)
        xi = exponential_path(benchmark_coefficients(kernel, m), noise, 1.0)
        worst = max(worst, float(np.abs(pi.values * xi.values - 1.0).max()))
    results.append(
        _check("kernel times benchmark is 1", worst <= 1e-10, f"max|pi*xi-1|={worst:.3g} tol=1e-10 kernels=100")
    )
    return results


# ----------------------------------------------------------------------------
# optimality


def _random_market(rng: np.random.Generator, n_assets: int) -> tuple[AssetSpec, list[AssetSpec], LevyMeasure]:
    n_atoms = int(rng.integers(1, 4))
    locs = rng.normal(0.0, 1.0, n_atoms)
    while len(np.unique(locs)) != n_atoms:
        locs = rng.normal(0.0, 1.0, n_atoms)
    measure = LevyMeasure(tuple(JumpAtom(float(x), float(w)) for x, w in zip(locs, rng.uniform(0.5, 15.0, n_atoms))))

    def spec() -> AssetSpec:
        return AssetSpec(
            float(rng.uniform(20.0, 300.0)),
            float(rng.uniform(0.05, 0.6)),
            tuple(rng.uniform(-0.7, 1.5, n_atoms)),
        )

    return spec(), [spec() for _ in range(n_assets)], measure


def suite_optimality(seed: int = DEFAULT_SEED, n_paths: int = 10_000) -> list[CheckResult]:
    results = []
    rng = np.random.default_rng(seed + 10)
    measure = _fig_measure()
    contract, a1, a2 = _fig_assets()
    horizon = 1.0
    step = 1e-3

    # 1-D sweep against the closed-form single-asset ratio, built-in market
    s2a = builtin_scenario("fig2a")
    co = single_coefficients(contract, a1, measure)
    sweep = brute_force_constant_hedge(s2a, 0.0, 2.0, step)
    gap = abs(sweep.best_ratios[0] - co.L / co.M)
    results.append(
        _check(
            "grid sweep finds the single-asset ratio",
            gap <= step,
            f"grid={sweep.best_ratios[0]:.4f} closed-form={co.L / co.M:.6f} |diff|={gap:.2e} step={step}",
        )
    )

    # randomized specs: argmin location, strict convexity, error-gap identity
    worst_arg = 0.0
    worst_gap = 0.0
    worst_sweep = 0.0
    min_curv = np.inf
    trials = 0
    while trials < 100:
        c, (a,), m = _random_market(rng, 1)
        co = single_coefficients(c, a, m)
        if co.M <= 1e-6 * max(co.K, co.M):
            continue
        trials += 1
        psi_hat = co.L / co.M
        # grid offset keeps the optimum generic with respect to the grid
        axis = (psi_hat - 0.25 + 0.000123) + step * np.arange(501)
        full = np.array([analytic_delta(c, [a], [x], m, horizon) for x in axis])
        worst_arg = max(worst_arg, abs(float(axis[np.argmin(full)]) - psi_hat))
        scale = horizon * c.initial_price**2
        quadratic = scale * (co.K - 2.0 * axis * co.L + axis**2 * co.M)
        worst_sweep = max(worst_sweep, float(np.abs(full - quadratic).max()) / scale)
        psi_alt = psi_hat + float(rng.uniform(-1.0, 1.0))
        gap_lhs = analytic_delta(c, [a], [psi_alt], m, horizon) - analytic_delta(c, [a], [psi_hat], m, horizon)
        gap_rhs = horizon * co.M * (psi_alt - psi_hat) ** 2 * c.initial_price**2
        worst_gap = max(worst_gap, abs(gap_lhs - gap_rhs) / max(1.0, abs(gap_rhs)))
        second = full[2:] - 2.0 * full[1:-1] + full[:-2]
        min_curv = min(min_curv, float(second.min()))
    results.append(
        _check(
            "grid values agree with the quadratic form",
            worst_sweep <= 1e-12,
            f"worst rel err={worst_sweep:.3g} tol=1e-12",
        )
    )
    results.append(
        _check(
            "randomized argmin within one grid step",
            worst_arg <= step,
            f"worst |grid-argmin - L/M|={worst_arg:.2e} step={step} specs=100",
        )
    )
    results.append(
        _check(
            "error-gap identity",
            worst_gap <= 1e-10,
            f"worst rel err={worst_gap:.3g} tol=1e-10 (gap = T*M*S^2*(psi-psi_hat)^2 in ratio units)",
        )
    )
    results.append(_check("error is strictly convex in the ratio", min_curv > 0.0, f"min second difference={min_curv:.3g}"))

    # closed-form two-asset hedge equals the SPD solve, randomized.  Draws
    # with a badly conditioned volatility Gram are redrawn (ledgered: the
    # solve accuracy is conditioning-limited, ~cond * eps).
    worst = 0.0
    trials = 0
    while trials < 1000:
        c, (b1, b2), m = _random_market(rng, 2)
        prices = (c.initial_price, b1.initial_price, b2.initial_price)
        system = gram_system(c, [b1, b2], prices[0], prices[1:], m)
        scaled = system.M / np.outer(system.asset_prices, system.asset_prices)
        eigs = np.linalg.eigvalsh(scaled)
        if eigs[0] <= 1e-4 * eigs.mean():
            continue
        trials += 1
        phi_solve = multi_asset_hedge(system)
        phi_closed = np.array(two_asset_hedge(c, b1, b2, prices, m))
        scale = max(1.0, float(np.abs(phi_solve).max()), float(np.abs(phi_closed).max()))
        worst = max(worst, float(np.abs(phi_solve - phi_closed).max()) / scale)
    results.append(
        _check(
            "two-asset closed form equals the linear solve",
            worst <= 1e-10,
            f"max rel err={worst:.3g} tol=1e-10 draws=1000",
        )
    )

    # 2-D sweep against the closed form on the built-in market
    s3 = builtin_scenario("fig3")
    ratios3 = scenario_ratios(s3)
    sweep2 = brute_force_constant_hedge(s3, 0.0, 1.0, step)
    gap2 = max(abs(sweep2.best_ratios[0] - ratios3[0]), abs(sweep2.best_ratios[1] - ratios3[1]))
    results.append(
        _check(
            "2-D grid sweep finds the two-asset ratios",
            gap2 <= step,
            f"grid=({sweep2.best_ratios[0]:.4f}, {sweep2.best_ratios[1]:.4f}) "
            f"closed-form=({ratios3[0]:.6f}, {ratios3[1]:.6f}) |diff|={gap2:.2e}",
        )
    )

    # optimal removes the fraction rho of the no-hedge error
    rho = rho_diagnostic(contract, a1, measure)
    co1 = single_coefficients(contract, a1, measure)
    d_opt = analytic_delta(contract, [a1], [co1.L / co1.M], measure, horizon)
    d_zero = analytic_delta(contract, [a1], [0.0], measure, horizon)
    lhs = d_opt
    rhs = (1.0 - rho) * d_zero
    results.append(
        _check(
            "optimal error is (1 - rho) times no-hedge error",
            abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs)),
            f"delta_opt={lhs:.6g} (1-rho)*delta_0={rhs:.6g} rho={rho:.6f}",
        )
    )

    # Monte Carlo error of the optimal single-asset hedge matches the closed
    # form.  Paths are Euler-integrated: the quadratic form is the exact
    # per-step variance of the linear increments, so the contract-normalized
    # estimator is unbiased for the frozen-price convention.
    grid = TimeGrid(1.0, 1000)
    s = builtin_scenario("fig2a", n_paths=n_paths, seed=seed + 5)
    ratios = scenario_ratios(s)
    samples = np.empty(n_paths)
    c0 = contract.initial_price
    for p in range(n_paths):
        noise = sample_noise(measure, grid, s.seed, p)
        cpath = integrate_proportional(natural_coefficients(contract, measure), noise, c0)
        apath = integrate_proportional(natural_coefficients(a1, measure), noise, a1.initial_price)
        report = evolve_portfolio(cpath, [apath], ConstantRatioRule((ratios[0],)), grid)
        rel = report.residual_increments / cpath.values[:-1]
        samples[p] = c0 * c0 * float(rel @ rel)
    mc = float(samples.mean())
    se = float(samples.std(ddof=1) / np.sqrt(n_paths))
    analytic = analytic_delta(contract, [a1], [ratios[0]], measure, horizon)
    results.append(
        _check(
            "monte carlo error matches the closed form",
            abs(mc - analytic) <= 3.0 * se,
            f"mc={mc:.4f} analytic={analytic:.4f} |diff|={abs(mc - analytic):.3g} 3se={3 * se:.3g} N={n_paths}",
        )
    )
    return results


# ----------------------------------------------------------------------------
# ordering


def suite_ordering(seed: int = DEFAULT_SEED, n_paths: int = 1000) -> list[CheckResult]:
    """Two hedging assets beat either one alone, analytically and by Monte Carlo."""
    results = []
    measure = _fig_measure()
    grid = TimeGrid(1.0, 1000)
    contract, a1, a2 = _fig_assets()
    horizon = grid.horizon

    r1 = scenario_ratios(builtin_scenario("fig2a"))
    r2 = scenario_ratios(builtin_scenario("fig2b"))
    r3 = scenario_ratios(builtin_scenario("fig3"))
    assets = [a1, a2]
    d1 = analytic_delta(contract, assets, r1, measure, horizon)
    d2 = analytic_delta(contract, assets, r2, measure, horizon)
    d3 = analytic_delta(contract, assets, r3, measure, horizon)
    results.append(
        _check(
            "closed form: two assets strictly beat each single hedge",
            d3 < min(d1, d2),
            f"delta(two)={d3:.6g} delta(asset1)={d1:.6g} delta(asset2)={d2:.6g}",
        )
    )

    # paired per-path integrated squared residuals on shared noise
    ints = np.empty((n_paths, 3))
    for p in range(n_paths):
        noise = sample_noise(measure, grid, seed + 6, p)
        cpath = geometric_price_path(contract, measure, noise, grid)
        paths = [geometric_price_path(a, measure, noise, grid) for a in assets]
        for j, ratios in enumerate((r1, r2, r3)):
            dv = evolve_portfolio(cpath, paths, ConstantRatioRule(ratios), grid).residual_increments
            ints[p, j] = float(dv @ dv)
    for j, label in ((0, "asset 1"), (1, "asset 2")):
        diff = ints[:, j] - ints[:, 2]
        mean = float(diff.mean())
        se = float(diff.std(ddof=1) / np.sqrt(n_paths))
        results.append(
            _check(
                f"monte carlo: two assets beat {label} (paired)",
                mean > 3.0 * se,
                f"mean diff={mean:.5g} 3se={3 * se:.5g} N={n_paths}",
            )
        )
    return results


# ----------------------------------------------------------------------------
# completeness


def suite_completeness(seed: int = DEFAULT_SEED, n_paths: int = 100) -> list[CheckResult]:
    """Pure-jump markets are complete: the hedge replicates path by path.

    Paths are Euler-integrated here: replication is an identity of the
    linear per-step increments, so residuals sit at machine precision.
    """
    results = []
    grid = TimeGrid(1.0, 1000)
    tol = 1e-9  # times C0

    # one atom, one asset
    measure1 = LevyMeasure((JumpAtom(1.0, 10.0),))
    contract1 = AssetSpec(100.0, 0.0, tuple(np.expm1(0.25 * measure1.locations)))
    asset1 = AssetSpec(100.0, 0.0, tuple(np.expm1(0.30 * measure1.locations)))
    co = single_coefficients(contract1, asset1, measure1)
    worst = 0.0
    for p in range(n_paths):
        noise = sample_noise(measure1, grid, seed + 7, p)
        cpath = integrate_proportional(natural_coefficients(contract1, measure1), noise, contract1.initial_price)
        apath = integrate_proportional(natural_coefficients(asset1, measure1), noise, asset1.initial_price)
        dv = evolve_portfolio(cpath, [apath], ConstantRatioRule((co.L / co.M,)), grid).residual_increments
        worst = max(worst, float(np.abs(dv).max()))
    results.append(
        _check(
            "single-asset replication in a one-atom market",
            worst <= tol * contract1.initial_price,
            f"max|dV|={worst:.3g} tol={tol * contract1.initial_price:.1e} paths={n_paths}",
        )
    )

    # two atoms, two assets (jumps only)
    measure2 = _fig_measure()
    contract2 = AssetSpec(100.0, 0.0, tuple(np.expm1(0.25 * measure2.locations)))
    b1 = AssetSpec(100.0, 0.0, tuple(np.expm1(0.30 * measure2.locations)))
    b2 = AssetSpec(100.0, 0.0, tuple(np.expm1(0.20 * measure2.locations)))
    phi1, phi2 = two_asset_hedge(contract2, b1, b2, (100.0, 100.0, 100.0), measure2)
    ratios = (phi1 * 100.0 / 100.0, phi2 * 100.0 / 100.0)
    worst = 0.0
    for p in range(n_paths):
        noise = sample_noise(measure2, grid, seed + 8, p)
        cpath = integrate_proportional(natural_coefficients(contract2, measure2), noise, 100.0)
        paths = [
            integrate_proportional(natural_coefficients(b1, measure2), noise, 100.0),
            integrate_proportional(natural_coefficients(b2, measure2), noise, 100.0),
        ]
        dv = evolve_portfolio(cpath, paths, ConstantRatioRule(ratios), grid).residual_increments
        worst = max(worst, float(np.abs(dv).max()))
    results.append(
        _check(
            "two-asset replication in a two-atom market",
            worst <= tol * contract2.initial_price,
            f"max|dV|={worst:.3g} tol={tol * contract2.initial_price:.1e} paths={n_paths}",
        )
    )
    return results


_SUITES = {
    "isometry": suite_isometry,
    "martingale": suite_martingale,
    "calculus": suite_calculus,
    "optimality": suite_optimality,
    "ordering": suite_ordering,
    "completeness": suite_completeness,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, n_paths: int | None = None) -> list[CheckResult]:
    """Run one named suite, or all of them with ``name == 'all'``."""
    defaults = {
        "isometry": 10_000,
        "martingale": 10_000,
        "calculus": 100,
        "optimality": 10_000,
        "ordering": 1000,
        "completeness": 100,
    }
    if name == "all":
        out = []
        for suite in SUITE_NAMES:
            out.extend(run_suite(suite, seed, n_paths))
        return out
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITE_NAMES + ('all',)}")
    return _SUITES[name](seed, n_paths if n_paths is not None else defaults[name])
