from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.stats import norm

from oracles import normal_sample
from sincsmooth.core.types import EstimatorConfig, Supersmooth
from sincsmooth.density import BootstrapPlan, bootstrap_band, select_radius, sup_deviation
from sincsmooth.density.band import quantile_order
from sincsmooth.errors import DomainError


def test_quantile_order() -> None:
    assert quantile_order(0.1, 200) == 180
    assert quantile_order(0.05, 20) == 19
    assert quantile_order(0.5, 1) == 1
    assert quantile_order(0.001, 10) == 10


def test_sup_deviation() -> None:
    value = sup_deviation([1.0, 2.5, 3.0], [1.5, 2.0, 3.1], n=100, R=4.0, d=1)
    assert value == pytest.approx(5.0 * 0.5)
    assert sup_deviation([], [], n=10, R=1.0, d=1) == 0.0
    with pytest.raises(DomainError):
        sup_deviation([1.0], [1.0, 2.0], n=10, R=1.0, d=1)


def test_plan_validation() -> None:
    with pytest.raises(DomainError):
        BootstrapPlan(B=0, seed=0, grid=np.zeros(3))
    with pytest.raises(DomainError):
        BootstrapPlan(B=10, seed=0, grid=np.zeros(0))
    assert BootstrapPlan(B=10, seed=0, grid=np.zeros(3)).grid.shape == (3, 1)


def test_band_is_reproducible_across_threads() -> None:
    sample = normal_sample(500, seed=3)
    grid = np.linspace(-2.0, 2.0, 21)
    plan = BootstrapPlan(B=40, seed=17, grid=grid)

    serial = bootstrap_band(sample, EstimatorConfig(radius=3.0, threads=1), plan, 0.1)
    threaded = bootstrap_band(sample, EstimatorConfig(radius=3.0, threads=4), plan, 0.1)

    np.testing.assert_array_equal(serial.statistics, threaded.statistics)
    assert serial.eta == threaded.eta
    assert serial.eta == float(np.sort(serial.statistics)[quantile_order(0.1, 40) - 1])
    np.testing.assert_allclose(serial.half_width, serial.eta * math.sqrt(3.0 / 500))
    np.testing.assert_allclose(serial.upper - serial.lower, 2.0 * serial.half_width)
    assert serial.level == pytest.approx(0.9)


@pytest.mark.slow
def test_band_covers_normal_density() -> None:
    n = 2000
    grid = np.linspace(-3.0, 3.0, 61)
    truth = norm.pdf(grid)
    R = select_radius(EstimatorConfig(smoothness=Supersmooth(alpha=2.0, c1=0.5)), n)  # noqa: N806
    assert R == pytest.approx(math.sqrt(math.log(n)))
    cfg = EstimatorConfig(radius=R)
    replicates = 50
    hits = 0
    for index in range(replicates):
        sample = normal_sample(n, seed=41, index=index)
        band = bootstrap_band(sample, cfg, BootstrapPlan(B=200, seed=index, grid=grid), 0.1)
        hits += bool(np.all((band.lower <= truth) & (truth <= band.upper)))
    assert hits / replicates >= 0.8
