from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.stats import norm

from oracles import normal_sample
from sincsmooth.core.numerics import two_sided_z
from sincsmooth.core.types import EstimatorConfig, SampleMatrix, Supersmooth
from sincsmooth.density import pointwise_ci, select_radius, variance_limit_check
from sincsmooth.errors import DomainError


def test_plugin_interval_width() -> None:
    sample = normal_sample(4000, seed=21)
    cfg = EstimatorConfig(radius=3.0)
    interval = pointwise_ci(sample, 0.5, cfg, 0.1, variance="plugin")

    expected_half = two_sided_z(0.1) * math.sqrt(3.0 * interval.estimate / (4000 * math.pi))
    assert interval.half_width == pytest.approx(expected_half, rel=1e-12)
    assert interval.level == pytest.approx(0.9)
    assert interval.lower < interval.estimate < interval.upper
    assert not interval.degenerate


def test_default_interval_uses_spread_of_kernel_terms() -> None:
    sample = normal_sample(500, seed=22)
    cfg = EstimatorConfig(radius=2.5)
    interval = pointwise_ci(sample, 0.3, cfg, 0.05)

    u = 0.3 - sample.data[:, 0]
    terms = np.sin(2.5 * u) / u / math.pi
    assert interval.estimate == pytest.approx(float(np.mean(terms)), rel=1e-10)
    expected_half = two_sided_z(0.05) * math.sqrt(float(np.var(terms, ddof=1)) / 500)
    assert interval.half_width == pytest.approx(expected_half, rel=1e-9)
    assert interval == pointwise_ci(sample, 0.3, cfg, 0.05, variance="empirical")


def test_plugin_interval_collapses_on_negative_estimate() -> None:
    sample = SampleMatrix([[0.0]])
    interval = pointwise_ci(sample, 4.0, EstimatorConfig(radius=1.0), 0.05, variance="plugin")
    assert interval.estimate < 0.0
    assert interval.lower == interval.upper == interval.estimate
    assert interval.degenerate


def test_interval_argument_checks() -> None:
    sample = normal_sample(10, seed=0)
    cfg = EstimatorConfig(radius=1.0)
    with pytest.raises(DomainError):
        pointwise_ci(sample, 0.0, cfg, 0.0)
    with pytest.raises(DomainError):
        pointwise_ci(sample, 0.0, cfg, 1.0)
    with pytest.raises(DomainError):
        pointwise_ci(SampleMatrix([[0.0]]), 0.0, cfg, 0.1)
    with pytest.raises(DomainError):
        pointwise_ci(sample, 0.0, cfg, 0.1, variance="bootstrap")  # type: ignore[arg-type]


def test_variance_limit_approaches_density_over_pi() -> None:
    sample = normal_sample(50000, seed=8)
    value = variance_limit_check(sample, 0.0, EstimatorConfig(radius=30.0))
    assert value == pytest.approx(norm.pdf(0.0) / math.pi, rel=0.15)


@pytest.mark.slow
def test_pointwise_coverage_at_rule_radius() -> None:
    n = 2000
    radius = select_radius(EstimatorConfig(smoothness=Supersmooth(alpha=2.0, c1=0.5)), n)
    assert radius == pytest.approx(math.sqrt(math.log(n)))
    cfg = EstimatorConfig(radius=radius)
    truth = float(norm.pdf(0.0))
    replicates = 500
    default_hits = 0
    plugin_hits = 0
    for index in range(replicates):
        sample = normal_sample(n, seed=31, index=index)
        interval = pointwise_ci(sample, 0.0, cfg, 0.1)
        plugin = pointwise_ci(sample, 0.0, cfg, 0.1, variance="plugin")
        default_hits += interval.lower <= truth <= interval.upper
        plugin_hits += plugin.lower <= truth <= plugin.upper

    assert 0.85 <= default_hits / replicates <= 0.95
    # R f / pi is about 2.5 times the finite-radius variance here
    assert plugin_hits / replicates >= 0.95
