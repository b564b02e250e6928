import numpy as np
import pytest

from levyhedge import AssetSpec, LevyMeasure, TimeGrid


@pytest.fixture(scope="session")
def bern_measure() -> LevyMeasure:
    # marks +1/-1, total rate 15, equal odds
    return LevyMeasure.bernoulli(rate=15.0, up_prob=0.5, up=1.0, down=-1.0)


@pytest.fixture(scope="session")
def unit_grid() -> TimeGrid:
    return TimeGrid(horizon=1.0, steps=1000)


def _geometric(initial: float, sigma: float, beta: float, measure: LevyMeasure) -> AssetSpec:
    return AssetSpec(initial, sigma, tuple(np.expm1(beta * measure.locations)))


@pytest.fixture(scope="session")
def contract(bern_measure) -> AssetSpec:
    return _geometric(100.0, 0.15, 0.25, bern_measure)


@pytest.fixture(scope="session")
def asset_high(bern_measure) -> AssetSpec:
    return _geometric(100.0, 0.20, 0.30, bern_measure)


@pytest.fixture(scope="session")
def asset_low(bern_measure) -> AssetSpec:
    return _geometric(100.0, 0.10, 0.20, bern_measure)
