"""Discrete jump measures, seeded noise, and pathwise integration.

All processes in this package are driven by one Brownian motion W and a
finite family of independent Poisson streams, one per jump mark.  A process
with drift ``alpha``, Brownian volatility ``beta`` and jump volatilities
``gamma_k`` (one per mark ``x_k`` with arrival intensity ``w_k``) evolves as

    dX_t = alpha dt + beta dW_t + sum_k gamma_k (dN_k - w_k dt),

i.e. every jump term is compensated.  Paths live on a uniform grid; the
jumps of a step are applied at the step end with coefficients frozen at the
step-start state, which is the grid realization of predictability.

Noise is generated from one master seed with per-path substreams; within a
path the Brownian and jump draws come from disjoint substreams, so enabling
or disabling jumps never perturbs the Brownian increments.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

__all__ = [
    "IntegrationError",
    "SingularDenominatorError",
    "JumpAtom",
    "LevyMeasure",
    "TimeGrid",
    "NoiseRealization",
    "SymmetricCoefficients",
    "PathSeries",
    "sample_noise",
    "compensate",
    "integrate",
    "integrate_proportional",
    "exponential_path",
    "product_coefficients",
    "quotient_coefficients",
]


class IntegrationError(RuntimeError):
    """Raised when an integrated path leaves the finite floats."""

    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


class SingularDenominatorError(ValueError):
    """Raised by the quotient transform when a denominator jump factor is 0."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class JumpAtom:
    """One jump mark with its expected arrival rate per unit time."""

    location: float
    intensity: float

    def __post_init__(self):
        if not np.isfinite(self.location):
            raise ValueError("atom location must be finite")
        if not (np.isfinite(self.intensity) and self.intensity > 0.0):
            raise ValueError("atom intensity must be finite and positive")


@dataclass(frozen=True)
class LevyMeasure:
    """Finite set of jump atoms; empty means a purely Brownian market."""

    atoms: tuple[JumpAtom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        locs = [a.location for a in self.atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be pairwise distinct")

    @classmethod
    def bernoulli(cls, rate: float, up_prob: float, up: float = 1.0, down: float = -1.0) -> "LevyMeasure":
        """Two-atom measure: marks {up, down} arriving at total rate ``rate``,
        the up mark with probability ``up_prob`` per arrival."""
        if not 0.0 < up_prob < 1.0:
            raise ValueError("up_prob must lie in (0, 1)")
        return cls((JumpAtom(up, rate * up_prob), JumpAtom(down, rate * (1.0 - up_prob))))

    def __len__(self) -> int:
        return len(self.atoms)

    @cached_property
    def locations(self) -> np.ndarray:
        return _readonly(np.array([a.location for a in self.atoms], dtype=float))

    @cached_property
    def intensities(self) -> np.ndarray:
        return _readonly(np.array([a.intensity for a in self.atoms], dtype=float))

    @property
    def total_intensity(self) -> float:
        return float(self.intensities.sum())


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0 = t_0 < ... < t_n = horizon with n = steps."""

    horizon: float
    steps: int

    def __post_init__(self):
        if not (np.isfinite(self.horizon) and self.horizon > 0.0):
            raise ValueError("horizon must be finite and positive")
        if self.steps < 1:
            raise ValueError("steps must be a positive integer")

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    @cached_property
    def times(self) -> np.ndarray:
        return _readonly(np.linspace(0.0, self.horizon, self.steps + 1))


@dataclass(frozen=True, eq=False)
class NoiseRealization:
    """One path's Brownian increments and per-step jump counts.

    ``brownian_increments`` has shape (steps,), each entry ~ Normal(0, dt).
    ``jump_counts`` has shape (steps, n_atoms); entry (i, k) is the number of
    arrivals of atom k during step i, ~ Poisson(intensity_k * dt).
    """

    measure: LevyMeasure
    grid: TimeGrid
    brownian_increments: np.ndarray
    jump_counts: np.ndarray

    def __post_init__(self):
        dw = np.asarray(self.brownian_increments, dtype=float)
        cnt = np.asarray(self.jump_counts, dtype=np.int64)
        if dw.shape != (self.grid.steps,):
            raise ValueError("brownian_increments length must equal grid.steps")
        if cnt.shape != (self.grid.steps, len(self.measure)):
            raise ValueError("jump_counts must have shape (steps, n_atoms)")
        if not np.isfinite(dw).all():
            raise ValueError("brownian increments must be finite")
        if (cnt < 0).any():
            raise ValueError("jump counts must be nonnegative")
        object.__setattr__(self, "brownian_increments", _readonly(dw))
        object.__setattr__(self, "jump_counts", _readonly(cnt))

    def jump_events(self, step: int) -> list[tuple[int, int]]:
        """Sparse view of one step's jumps as (atom_index, count) pairs."""
        row = self.jump_counts[step]
        return [(int(k), int(c)) for k, c in enumerate(row) if c > 0]

    def cumulative_jump_count(self) -> np.ndarray:
        """Total arrivals up to each grid time (length steps + 1, starts at 0)."""
        out = np.zeros(self.grid.steps + 1)
        np.cumsum(self.jump_counts.sum(axis=1), out=out[1:])
        return out

    def cumulative_jump_sum(self) -> np.ndarray:
        """Sum of jump marks up to each grid time: the driving compound Poisson path."""
        out = np.zeros(self.grid.steps + 1)
        if len(self.measure):
            np.cumsum(self.jump_counts @ self.measure.locations, out=out[1:])
        return out


@dataclass(frozen=True)
class SymmetricCoefficients:
    """Constant coefficient triple (drift, brownian_vol, jump_vol) over a measure.

    ``jump_vol`` holds one gamma(x_k) per atom of ``measure``, in atom order.
    """

    drift: float
    brownian_vol: float
    jump_vol: tuple[float, ...]
    measure: LevyMeasure

    def __post_init__(self):
        object.__setattr__(self, "jump_vol", tuple(float(g) for g in self.jump_vol))
        if len(self.jump_vol) != len(self.measure):
            raise ValueError("jump_vol length must equal the measure's atom count")
        if not (np.isfinite(self.drift) and np.isfinite(self.brownian_vol)):
            raise ValueError("drift and brownian_vol must be finite")
        if not all(np.isfinite(g) for g in self.jump_vol):
            raise ValueError("jump volatilities must be finite")

    @classmethod
    def null(cls, measure: LevyMeasure) -> "SymmetricCoefficients":
        return cls(0.0, 0.0, (0.0,) * len(measure), measure)

    @property
    def jump_vol_array(self) -> np.ndarray:
        return np.asarray(self.jump_vol, dtype=float)


@dataclass(frozen=True, eq=False)
class PathSeries:
    """A path on the grid plus its pre-jump states.

    ``values[i]`` is the state at t_i.  ``left_limits[i]`` is the state at the
    end of step i after the continuous part of the step but before that step's
    jumps are applied; at jump-free steps it equals ``values[i + 1]``.
    """

    values: np.ndarray
    left_limits: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        ll = np.asarray(self.left_limits, dtype=float)
        if v.ndim != 1 or ll.shape != (v.shape[0] - 1,):
            raise ValueError("left_limits must be one shorter than values")
        if not (np.isfinite(v).all() and np.isfinite(ll).all()):
            raise ValueError("path entries must be finite")
        object.__setattr__(self, "values", _readonly(v))
        object.__setattr__(self, "left_limits", _readonly(ll))

    @property
    def initial(self) -> float:
        return float(self.values[0])

    @property
    def terminal(self) -> float:
        return float(self.values[-1])

    def increments(self) -> np.ndarray:
        return np.diff(self.values)


CoefficientProvider = Union[
    SymmetricCoefficients, Callable[[int, float], SymmetricCoefficients]
]


def sample_noise(measure: LevyMeasure, grid: TimeGrid, seed: int, path_index: int = 0) -> NoiseRealization:
    """Draw one path's noise, deterministically in (seed, path_index).

    The Brownian and jump draws come from disjoint substreams keyed by
    (path_index, 0) and (path_index, 1) under the master seed, so paths are
    independent and the Brownian part is invariant to the jump measure.
    """
    if path_index < 0:
        raise ValueError("path_index must be nonnegative")
    dt = grid.dt
    brownian_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(path_index, 0)))
    dw = brownian_rng.normal(0.0, np.sqrt(dt), grid.steps)
    if len(measure):
        jump_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(path_index, 1)))
        counts = jump_rng.poisson(measure.intensities * dt, size=(grid.steps, len(measure)))
    else:
        counts = np.zeros((grid.steps, 0), dtype=np.int64)
    return NoiseRealization(measure, grid, dw, counts)


def compensate(measure: LevyMeasure, jump_vol) -> float:
    """Compensator integral of a jump volatility: sum_k gamma(x_k) * intensity_k."""
    gam = np.asarray(jump_vol, dtype=float)
    if gam.shape != (len(measure),):
        raise ValueError("jump_vol length must equal the measure's atom count")
    return float(gam @ measure.intensities) if len(measure) else 0.0


def _check_same_measure(a: SymmetricCoefficients, b: SymmetricCoefficients) -> LevyMeasure:
    if a.measure != b.measure:
        raise ValueError("coefficients are defined over different measures")
    return a.measure


def integrate(coeffs: CoefficientProvider, noise: NoiseRealization, x0: float) -> PathSeries:
    """Euler-integrate the compensated dynamics along one noise path.

    ``coeffs`` is either a constant :class:`SymmetricCoefficients` or a
    callable ``(step, x_left) -> SymmetricCoefficients`` evaluated at the
    step-start state.  Each step applies

        x_next = x + alpha dt + beta dW_i + sum_k gamma_k (count_ik - w_k dt),

    and the recorded left limit is ``x_next`` minus the jump terms.

    Raises :class:`IntegrationError` at the first non-finite state.
    """
    grid, measure = noise.grid, noise.measure
    dt, n = grid.dt, grid.steps
    counts = noise.jump_counts
    dw = noise.brownian_increments

    # overflow produces non-finite states that are reported as typed errors
    with np.errstate(over="ignore", invalid="ignore"):
        if isinstance(coeffs, SymmetricCoefficients):
            if coeffs.measure != measure:
                raise ValueError("coefficients and noise use different measures")
            gam = coeffs.jump_vol_array
            jump_terms = counts @ gam
            inc = coeffs.drift * dt + coeffs.brownian_vol * dw + jump_terms - compensate(measure, gam) * dt
            values = np.empty(n + 1)
            values[0] = x0
            np.cumsum(inc, out=values[1:])
            values[1:] += x0
            if not np.isfinite(values).all():
                raise IntegrationError(int(np.flatnonzero(~np.isfinite(values))[0]) - 1)
            return PathSeries(values, values[1:] - jump_terms)

        intensities = measure.intensities
        values = np.empty(n + 1)
        left = np.empty(n)
        values[0] = x0
        x = x0
        for i in range(n):
            c = coeffs(i, x)
            gam = c.jump_vol_array
            continuous = c.drift * dt + c.brownian_vol * dw[i] - float(gam @ intensities) * dt
            left[i] = x + continuous
            x = left[i] + float(gam @ counts[i])
            if not np.isfinite(x):
                raise IntegrationError(i)
            values[i + 1] = x
    return PathSeries(values, left)


def integrate_proportional(coeffs: SymmetricCoefficients, noise: NoiseRealization, x0: float) -> PathSeries:
    """Euler-integrate proportional dynamics dX = X_left * (alpha dt + beta dW + jumps).

    Equivalent to :func:`integrate` with state-scaled coefficients, but the
    linear-in-state increments vectorize into a cumulative product.
    """
    if coeffs.measure != noise.measure:
        raise ValueError("coefficients and noise use different measures")
    dt = noise.grid.dt
    gam = coeffs.jump_vol_array
    jump_terms = noise.jump_counts @ gam
    inc = (
        coeffs.drift * dt
        + coeffs.brownian_vol * noise.brownian_increments
        + jump_terms
        - compensate(noise.measure, gam) * dt
    )
    values = np.empty(noise.grid.steps + 1)
    values[0] = x0
    np.cumprod(1.0 + inc, out=values[1:])
    values[1:] *= x0
    if not np.isfinite(values).all():
        raise IntegrationError(int(np.flatnonzero(~np.isfinite(values))[0]) - 1)
    return PathSeries(values, values[1:] - values[:-1] * jump_terms)


def exponential_path(coeffs: SymmetricCoefficients, noise: NoiseRealization, x0: float) -> PathSeries:
    """Closed-form path of the stochastic exponential of proportional dynamics.

    X_t = x0 * exp( (alpha - beta^2/2) t + beta W_t
                    + sum_jumps log(1 + gamma(x)) - t * sum_k gamma_k w_k ).

    Requires 1 + gamma_k > 0 for every atom; output is strictly positive
    (for x0 > 0) and exact on the grid given the realized noise.
    """
    if coeffs.measure != noise.measure:
        raise ValueError("coefficients and noise use different measures")
    gam = coeffs.jump_vol_array
    if np.any(1.0 + gam <= 0.0):
        raise ValueError("exponential dynamics need jump volatilities > -1")
    grid = noise.grid
    t = grid.times[1:]
    log_factors = np.log1p(gam)
    jump_log = noise.jump_counts @ log_factors
    exponent = (
        (coeffs.drift - 0.5 * coeffs.brownian_vol**2 - compensate(noise.measure, gam)) * t
        + coeffs.brownian_vol * np.cumsum(noise.brownian_increments)
        + np.cumsum(jump_log)
    )
    values = np.empty(grid.steps + 1)
    values[0] = x0
    values[1:] = x0 * np.exp(exponent)
    return PathSeries(values, x0 * np.exp(exponent - jump_log))


def product_coefficients(a: SymmetricCoefficients, b: SymmetricCoefficients) -> SymmetricCoefficients:
    """Coefficients of X*Y for proportional processes X, Y over the same measure."""
    measure = _check_same_measure(a, b)
    ga, gb = a.jump_vol_array, b.jump_vol_array
    drift = a.drift + b.drift + a.brownian_vol * b.brownian_vol + compensate(measure, ga * gb)
    return SymmetricCoefficients(
        drift, a.brownian_vol + b.brownian_vol, tuple(ga + gb + ga * gb), measure
    )


def quotient_coefficients(a: SymmetricCoefficients, b: SymmetricCoefficients) -> SymmetricCoefficients:
    """Coefficients of X/Y for proportional processes X, Y over the same measure.

    Raises :class:`SingularDenominatorError` if any denominator jump factor
    1 + gamma_k vanishes.
    """
    measure = _check_same_measure(a, b)
    ga, gb = a.jump_vol_array, b.jump_vol_array
    denom = 1.0 + gb
    if np.any(denom == 0.0):
        raise SingularDenominatorError("denominator jump factor 1 + gamma is zero at some atom")
    gq = (ga - gb) / denom
    drift = (
        a.drift
        - b.drift
        - b.brownian_vol * (a.brownian_vol - b.brownian_vol)
        - compensate(measure, gb * gq)
    )
    return SymmetricCoefficients(drift, a.brownian_vol - b.brownian_vol, tuple(gq), measure)
