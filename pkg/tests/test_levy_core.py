import numpy as np
import pytest

from levyhedge import (
    IntegrationError,
    JumpAtom,
    LevyMeasure,
    NoiseRealization,
    SingularDenominatorError,
    SymmetricCoefficients,
    TimeGrid,
    compensate,
    exponential_path,
    integrate,
    integrate_proportional,
    product_coefficients,
    quotient_coefficients,
    sample_noise,
)

SEED = 20240


def coeffs(measure, drift=0.0, beta=0.0, gamma=None):
    gamma = (0.0,) * len(measure) if gamma is None else gamma
    return SymmetricCoefficients(drift, beta, gamma, measure)


# ---------------------------------------------------------------- types


def test_atom_rejects_nonpositive_intensity():
    with pytest.raises(ValueError):
        JumpAtom(1.0, 0.0)
    with pytest.raises(ValueError):
        JumpAtom(1.0, -2.0)


def test_measure_rejects_duplicate_locations():
    with pytest.raises(ValueError):
        LevyMeasure((JumpAtom(1.0, 1.0), JumpAtom(1.0, 2.0)))


def test_bernoulli_measure_splits_rate(bern_measure):
    assert bern_measure.locations.tolist() == [1.0, -1.0]
    assert bern_measure.intensities.tolist() == [7.5, 7.5]
    assert bern_measure.total_intensity == 15.0


def test_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(0.0, 10)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0)
    grid = TimeGrid(2.0, 4)
    assert grid.dt == 0.5
    assert grid.times.tolist() == [0.0, 0.5, 1.0, 1.5, 2.0]


# ---------------------------------------------------------------- noise


def test_empty_measure_has_no_jumps(unit_grid):
    noise = sample_noise(LevyMeasure(), unit_grid, SEED)
    assert noise.jump_counts.shape == (1000, 0)
    assert all(noise.jump_events(i) == [] for i in (0, 500, 999))


def test_sample_noise_is_bit_deterministic(bern_measure, unit_grid):
    a = sample_noise(bern_measure, unit_grid, SEED, path_index=7)
    b = sample_noise(bern_measure, unit_grid, SEED, path_index=7)
    assert np.array_equal(a.brownian_increments, b.brownian_increments)
    assert np.array_equal(a.jump_counts, b.jump_counts)


def test_paths_and_seeds_give_different_noise(bern_measure, unit_grid):
    base = sample_noise(bern_measure, unit_grid, SEED, 0)
    other_path = sample_noise(bern_measure, unit_grid, SEED, 1)
    other_seed = sample_noise(bern_measure, unit_grid, SEED + 1, 0)
    assert not np.array_equal(base.brownian_increments, other_path.brownian_increments)
    assert not np.array_equal(base.brownian_increments, other_seed.brownian_increments)


def test_jump_stream_does_not_touch_brownian_stream(bern_measure, unit_grid):
    with_jumps = sample_noise(bern_measure, unit_grid, SEED, 3)
    without = sample_noise(LevyMeasure(), unit_grid, SEED, 3)
    assert np.array_equal(with_jumps.brownian_increments, without.brownian_increments)


def test_mean_total_jump_count_matches_rate(bern_measure, unit_grid):
    n = 10_000
    totals = np.array(
        [sample_noise(bern_measure, unit_grid, SEED, p).jump_counts.sum() for p in range(n)],
        dtype=float,
    )
    se = totals.std(ddof=1) / np.sqrt(n)
    assert abs(totals.mean() - 15.0) <= 3.0 * se


def test_jump_events_sparse_view(bern_measure):
    grid = TimeGrid(1.0, 2)
    counts = np.array([[0, 2], [0, 0]])
    noise = NoiseRealization(bern_measure, grid, np.zeros(2), counts)
    assert noise.jump_events(0) == [(1, 2)]
    assert noise.jump_events(1) == []
    assert noise.cumulative_jump_count().tolist() == [0.0, 2.0, 2.0]
    assert noise.cumulative_jump_sum().tolist() == [0.0, -2.0, -2.0]


def test_noise_shape_validation(bern_measure, unit_grid):
    with pytest.raises(ValueError):
        NoiseRealization(bern_measure, unit_grid, np.zeros(999), np.zeros((1000, 2), dtype=int))
    with pytest.raises(ValueError):
        NoiseRealization(bern_measure, unit_grid, np.zeros(1000), np.zeros((1000, 1), dtype=int))


# ---------------------------------------------------------------- compensate


def test_compensate_zero_integrand(bern_measure):
    assert compensate(bern_measure, (0.0, 0.0)) == 0.0


def test_compensate_single_atom():
    m = LevyMeasure((JumpAtom(1.0, 2.0),))
    assert compensate(m, (3.0,)) == 6.0


def test_compensate_two_atom_value(bern_measure):
    # direct two-term arithmetic: 7.5 (e^0.3 - 1) + 7.5 (e^-0.3 - 1)
    expected = 7.5 * (np.exp(0.3) - 1.0) + 7.5 * (np.exp(-0.3) - 1.0)
    got = compensate(bern_measure, (np.exp(0.3) - 1.0, np.exp(-0.3) - 1.0))
    assert got == pytest.approx(expected, abs=1e-14)
    assert got == pytest.approx(0.68008, abs=5e-6)


def test_compensate_is_linear(bern_measure):
    rng = np.random.default_rng(SEED)
    for _ in range(25):
        g1, g2 = rng.normal(size=2), rng.normal(size=2)
        a, b = rng.normal(size=2)
        lhs = compensate(bern_measure, a * g1 + b * g2)
        rhs = a * compensate(bern_measure, g1) + b * compensate(bern_measure, g2)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_compensate_length_mismatch(bern_measure):
    with pytest.raises(ValueError):
        compensate(bern_measure, (1.0,))


# ---------------------------------------------------------------- integrate


def test_null_dynamics_stay_constant(bern_measure, unit_grid):
    noise = sample_noise(bern_measure, unit_grid, SEED)
    path = integrate(coeffs(bern_measure), noise, 5.0)
    assert np.all(path.values == 5.0)
    assert np.all(path.left_limits == 5.0)


def test_pure_drift_is_exact(bern_measure, unit_grid):
    noise = sample_noise(bern_measure, unit_grid, SEED)
    path = integrate(coeffs(bern_measure, drift=1.0), noise, 2.0)
    assert path.terminal == pytest.approx(3.0, abs=1e-12)


def test_left_limits_exclude_the_jump_terms(bern_measure, unit_grid):
    noise = sample_noise(bern_measure, unit_grid, SEED, 11)
    gamma = np.array([0.4, -0.2])
    path = integrate(coeffs(bern_measure, drift=0.3, beta=0.5, gamma=tuple(gamma)), noise, 1.0)
    np.testing.assert_allclose(
        path.left_limits, path.values[1:] - noise.jump_counts @ gamma, rtol=0, atol=1e-12
    )


def test_callable_provider_matches_constant(bern_measure):
    grid = TimeGrid(1.0, 200)
    noise = sample_noise(bern_measure, grid, SEED, 2)
    const = coeffs(bern_measure, drift=0.1, beta=0.3, gamma=(0.2, -0.1))
    a = integrate(const, noise, 1.5)
    b = integrate(lambda step, x: const, noise, 1.5)
    np.testing.assert_allclose(a.values, b.values, rtol=1e-12)
    np.testing.assert_allclose(a.left_limits, b.left_limits, rtol=1e-12)


def test_state_dependent_provider_sees_left_limit(bern_measure):
    grid = TimeGrid(1.0, 50)
    noise = sample_noise(bern_measure, grid, SEED, 4)
    seen = []

    def provider(step, x):
        seen.append((step, x))
        return coeffs(bern_measure, drift=1.0)

    path = integrate(provider, noise, 0.0)
    assert [s for s, _ in seen] == list(range(50))
    np.testing.assert_allclose([x for _, x in seen], path.values[:-1], rtol=0, atol=0)


def test_nonfinite_state_raises_with_step(bern_measure):
    # coefficients stay finite; the running state overflows at step 7
    grid = TimeGrid(10.0, 10)
    noise = sample_noise(bern_measure, grid, SEED)

    def provider(step, x):
        return coeffs(bern_measure, drift=1.7e308 if step >= 6 else 0.0)

    with pytest.raises(IntegrationError) as err:
        integrate(provider, noise, 0.0)
    assert err.value.step == 7


def test_isometry_brownian_only(unit_grid):
    m = LevyMeasure()
    n = 3000
    sq = np.empty(n)
    for p in range(n):
        path = integrate(coeffs(m, beta=1.0), sample_noise(m, unit_grid, SEED, p), 0.0)
        sq[p] = (path.terminal - path.initial) ** 2
    se = sq.std(ddof=1) / np.sqrt(n)
    assert abs(sq.mean() - 1.0) <= 3.0 * se


def test_driftless_integration_keeps_mean(bern_measure, unit_grid):
    n = 3000
    c = coeffs(bern_measure, beta=0.5, gamma=(0.3, -0.3))
    x = np.array(
        [integrate(c, sample_noise(bern_measure, unit_grid, SEED + 1, p), 2.0).terminal for p in range(n)]
    )
    se = x.std(ddof=1) / np.sqrt(n)
    assert abs(x.mean() - 2.0) <= 3.0 * se


def test_integrate_proportional_matches_scaled_provider(bern_measure):
    grid = TimeGrid(1.0, 500)
    noise = sample_noise(bern_measure, grid, SEED, 6)
    c = coeffs(bern_measure, drift=0.05, beta=0.2, gamma=(0.3, -0.2))

    def scaled(step, x):
        return SymmetricCoefficients(
            c.drift * x, c.brownian_vol * x, tuple(np.asarray(c.jump_vol) * x), bern_measure
        )

    a = integrate_proportional(c, noise, 1.0)
    b = integrate(scaled, noise, 1.0)
    np.testing.assert_allclose(a.values, b.values, rtol=1e-10)


# ---------------------------------------------------------------- transforms


def test_product_with_null_is_identity(bern_measure):
    a = coeffs(bern_measure, drift=0.2, beta=0.4, gamma=(0.1, -0.3))
    null = SymmetricCoefficients.null(bern_measure)
    out = product_coefficients(null, a)
    assert out.drift == pytest.approx(a.drift, abs=1e-15)
    assert out.brownian_vol == a.brownian_vol
    assert out.jump_vol == a.jump_vol


def test_product_of_equal_coefficients_worked_example():
    # single atom, intensity 1: alpha' = 2 alpha + beta^2 + gamma^2,
    # beta' = 2 beta, gamma' = 2 gamma + gamma^2
    m = LevyMeasure((JumpAtom(1.0, 1.0),))
    a = SymmetricCoefficients(0.07, 0.1, (0.2,), m)
    out = product_coefficients(a, a)
    assert out.drift == pytest.approx(2 * 0.07 + 0.01 + 0.04, abs=1e-15)
    assert out.brownian_vol == pytest.approx(0.2, abs=1e-15)
    assert out.jump_vol[0] == pytest.approx(0.44, abs=1e-15)


def test_transform_measure_mismatch_raises(bern_measure):
    other = LevyMeasure((JumpAtom(0.5, 1.0), JumpAtom(-0.5, 1.0)))
    a = coeffs(bern_measure, gamma=(0.1, 0.2))
    b = SymmetricCoefficients(0.0, 0.0, (0.1, 0.2), other)
    with pytest.raises(ValueError):
        product_coefficients(a, b)
    with pytest.raises(ValueError):
        quotient_coefficients(a, b)


def test_quotient_of_self_is_null(bern_measure):
    a = coeffs(bern_measure, drift=0.3, beta=0.25, gamma=(0.5, -0.4))
    out = quotient_coefficients(a, a)
    assert out.drift == pytest.approx(0.0, abs=1e-15)
    assert out.brownian_vol == 0.0
    assert out.jump_vol == (0.0, 0.0)


def test_quotient_then_product_recovers_numerator(bern_measure):
    rng = np.random.default_rng(SEED)
    for _ in range(40):
        a = coeffs(bern_measure, rng.normal(0, 0.3), rng.normal(0, 0.4), tuple(rng.uniform(-0.6, 1.2, 2)))
        b = coeffs(bern_measure, rng.normal(0, 0.3), rng.normal(0, 0.4), tuple(rng.uniform(-0.6, 1.2, 2)))
        back = product_coefficients(quotient_coefficients(a, b), b)
        assert back.drift == pytest.approx(a.drift, abs=1e-12)
        assert back.brownian_vol == pytest.approx(a.brownian_vol, abs=1e-12)
        np.testing.assert_allclose(back.jump_vol, a.jump_vol, rtol=0, atol=1e-12)


def test_quotient_singular_denominator(bern_measure):
    a = coeffs(bern_measure, gamma=(0.2, 0.2))
    b = coeffs(bern_measure, gamma=(-1.0, 0.2))
    with pytest.raises(SingularDenominatorError):
        quotient_coefficients(a, b)


# ---------------------------------------------------------------- exponential paths


def test_exponential_product_and_quotient_pointwise(bern_measure, unit_grid):
    rng = np.random.default_rng(SEED + 2)
    for trial in range(10):
        a = coeffs(bern_measure, rng.normal(0, 0.3), rng.normal(0, 0.4), tuple(rng.uniform(-0.6, 1.2, 2)))
        b = coeffs(bern_measure, rng.normal(0, 0.3), rng.normal(0, 0.4), tuple(rng.uniform(-0.6, 1.2, 2)))
        noise = sample_noise(bern_measure, unit_grid, SEED + 3, trial)
        xa = exponential_path(a, noise, 1.2)
        xb = exponential_path(b, noise, 0.8)
        prod = exponential_path(product_coefficients(a, b), noise, 1.2 * 0.8)
        quot = exponential_path(quotient_coefficients(a, b), noise, 1.2 / 0.8)
        np.testing.assert_allclose(prod.values, xa.values * xb.values, rtol=1e-10)
        np.testing.assert_allclose(quot.values, xa.values / xb.values, rtol=1e-10)


def test_exponential_left_limits_factor_out_jumps(bern_measure, unit_grid):
    c = coeffs(bern_measure, drift=0.1, beta=0.2, gamma=(0.35, -0.22))
    noise = sample_noise(bern_measure, unit_grid, SEED, 9)
    path = exponential_path(c, noise, 50.0)
    factors = (1.0 + np.asarray(c.jump_vol)) ** noise.jump_counts
    np.testing.assert_allclose(path.values[1:], path.left_limits * factors.prod(axis=1), rtol=1e-12)
    no_jump = noise.jump_counts.sum(axis=1) == 0
    np.testing.assert_allclose(path.left_limits[no_jump], path.values[1:][no_jump], rtol=0, atol=0)


def test_exponential_requires_jump_vol_above_minus_one(bern_measure, unit_grid):
    noise = sample_noise(bern_measure, unit_grid, SEED)
    with pytest.raises(ValueError):
        exponential_path(coeffs(bern_measure, gamma=(-1.0, 0.0)), noise, 1.0)


def test_euler_paths_approach_closed_form_at_first_order(bern_measure):
    # pure-jump coefficients: the Euler error is O(dt), so halving dt halves
    # the median sup-norm gap on shared (coarsened) noise.
    c = coeffs(bern_measure, drift=0.02, gamma=tuple(np.expm1(0.3 * bern_measure.locations)))
    ratios = []
    for p in range(40):
        fine = sample_noise(bern_measure, TimeGrid(1.0, 2000), SEED + 4, p)
        coarse = NoiseRealization(
            bern_measure,
            TimeGrid(1.0, 1000),
            fine.brownian_increments.reshape(-1, 2).sum(axis=1),
            fine.jump_counts.reshape(-1, 2, 2).sum(axis=1),
        )
        gaps = []
        for noise in (coarse, fine):
            euler = integrate_proportional(c, noise, 1.0)
            closed = exponential_path(c, noise, 1.0)
            gaps.append(np.abs(euler.values - closed.values).max())
        ratios.append(gaps[1] / gaps[0])
    assert np.median(ratios) <= 0.55


def test_path_series_validation():
    with pytest.raises(ValueError):
        from levyhedge import PathSeries

        PathSeries(np.array([1.0, 2.0, 3.0]), np.array([1.0]))
