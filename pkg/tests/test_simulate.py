from __future__ import annotations

import math

import numpy as np
import pytest

from sincsmooth.core.types import LabeledSample, MarkovSeries, SampleMatrix
from sincsmooth.errors import DegenerateSmootherError, DomainError
from sincsmooth.ingest import log_returns
from sincsmooth.simulate import (
    ExampleId,
    ExampleSpec,
    default_bandwidth,
    gaussian_nw_baseline,
    generate,
    mise,
    replicate_example1,
)
from sincsmooth.simulate.examples import curve_range, regression_curve, true_regression


def test_spec_validation_and_sizes() -> None:
    assert ExampleSpec(ExampleId.EX1).size == 1000
    assert ExampleSpec(ExampleId.EX2).size == 100_000
    assert ExampleSpec(ExampleId.EX2, full_scale=True).size == 1_000_000
    assert ExampleSpec(ExampleId.EX4, full_scale=True).size == 10_000
    assert ExampleSpec(ExampleId.EX6, overrides={"dim": 2.0}).size == 100_000
    assert ExampleSpec(ExampleId.EX7).size == 9311
    assert ExampleSpec(3, n=50).id is ExampleId.EX3
    assert ExampleSpec(ExampleId.EX4, overrides={"h": 0.3}).params["h"] == 0.3

    with pytest.raises(DomainError):
        ExampleSpec(ExampleId.EX1, n=0)
    with pytest.raises(DomainError):
        ExampleSpec(ExampleId.EX2, overrides={"h": 0.1})
    with pytest.raises(ValueError):
        ExampleSpec(8)


def test_generation_is_seeded() -> None:
    spec = ExampleSpec(ExampleId.EX4, n=200, seed=7)
    first = generate(spec)
    second = generate(spec)
    other = generate(ExampleSpec(ExampleId.EX4, n=200, seed=7, stream_index=1))
    assert isinstance(first, SampleMatrix)
    assert isinstance(second, SampleMatrix)
    assert isinstance(other, SampleMatrix)
    np.testing.assert_array_equal(first.data, second.data)
    assert not np.array_equal(first.data, other.data)


@pytest.mark.parametrize("example", [ExampleId.EX1, ExampleId.EX2, ExampleId.EX3])
def test_noiseless_regression_examples_are_exact(example: ExampleId) -> None:
    data = generate(ExampleSpec(example, n=100, seed=1, overrides={"noise": 0.0}))
    assert isinstance(data, LabeledSample)
    np.testing.assert_allclose(data.y, true_regression(example, data.x.data), atol=1e-12)


def test_example_shapes() -> None:
    ex2 = generate(ExampleSpec(ExampleId.EX2, n=30))
    ex3 = generate(ExampleSpec(ExampleId.EX3, n=30))
    ex6 = generate(ExampleSpec(ExampleId.EX6, n=30, overrides={"dim": 2.0}))
    assert ex2.d == 4
    assert ex3.d == 5
    assert isinstance(ex6, MarkovSeries)
    assert ex6.data.shape == (30, 2)
    np.testing.assert_array_equal(ex6.data[0], [0.5, 0.2])

    with pytest.raises(DomainError):
        generate(ExampleSpec(ExampleId.EX6, n=30, overrides={"dim": 3.0}))
    with pytest.raises(DomainError):
        generate(ExampleSpec(ExampleId.EX1, n=30, overrides={"independent": 0.5}))
    with pytest.raises(DomainError):
        generate(ExampleSpec(ExampleId.EX4, n=30, overrides={"weight": 1.5}))


def test_example5_branches_without_noise() -> None:
    data = generate(ExampleSpec(ExampleId.EX5, n=500, seed=2, overrides={"sd": 0.0}))
    assert isinstance(data, LabeledSample)
    x = data.x.data[:, 0]
    assert np.all(np.abs(x) <= 2.0)
    np.testing.assert_allclose(np.abs(data.y), x * x)
    assert np.any(data.y > 0.5)
    assert np.any(data.y < -0.5)


def test_example4_single_component() -> None:
    spec = ExampleSpec(ExampleId.EX4, n=2000, seed=3, overrides={"weight": 1.0, "h": 0.0})
    data = generate(spec)
    assert isinstance(data, SampleMatrix)
    assert float(np.mean(data.data)) == pytest.approx(-2.0, abs=0.05)
    assert float(np.std(data.data)) == pytest.approx(0.6, abs=0.05)


def test_example7_log_returns() -> None:
    prices = generate(ExampleSpec(ExampleId.EX7, seed=4))
    assert isinstance(prices, MarkovSeries)
    assert prices.data[0, 0] == pytest.approx(100.0)
    assert np.all(prices.data > 0.0)
    returns = log_returns(prices.data)[:, 0]
    assert returns.shape == (9310,)
    assert float(np.std(returns)) == pytest.approx(0.1, rel=0.05)
    lag1 = float(np.corrcoef(returns[:-1], returns[1:])[0, 1])
    assert 0.05 <= lag1 <= 0.15


def test_regression_curves() -> None:
    assert curve_range(ExampleId.EX2) == (-0.4, 0.4)
    curve = regression_curve(ExampleId.EX2, [0.0])
    np.testing.assert_allclose(
        curve[0], [math.sqrt(2.0), 0.0, math.sin(50.0 / math.pi), math.exp(0.5)]
    )
    diagonal = regression_curve(ExampleId.EX3, [0.2, -0.2])
    assert diagonal.shape == (2, 5)
    np.testing.assert_allclose(true_regression(ExampleId.EX3, diagonal), [0.75, -0.75])
    assert true_regression(ExampleId.EX1, [1.0, 2.0])[0] == pytest.approx(-5.0)

    with pytest.raises(DomainError):
        regression_curve(ExampleId.EX1, [0.0])
    with pytest.raises(DomainError):
        curve_range(ExampleId.EX5)
    with pytest.raises(DomainError):
        true_regression(ExampleId.EX4, [0.0])


def test_mise() -> None:
    assert mise([1.0, 2.0], [1.0, 0.0], [0.5, 0.25]) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        mise([1.0], [1.0, 2.0], [1.0, 1.0])


def test_gaussian_baseline() -> None:
    assert default_bandwidth(1000, 2) == pytest.approx(1000.0 ** (-1.0 / 6.0))
    data = LabeledSample([[0.0, 0.0], [1.0, 1.0], [-1.0, 2.0]], [4.0, 4.0, 4.0])
    assert gaussian_nw_baseline(data, [0.3, 0.3], 0.5) == 4.0

    with pytest.raises(DomainError):
        gaussian_nw_baseline(data, [0.0, 0.0], 0.0)
    with pytest.raises(DegenerateSmootherError):
        gaussian_nw_baseline(data, [100.0, 100.0], 0.01)


def test_example1_replicates_are_deterministic() -> None:
    first = replicate_example1(4, n=300, seed=5)
    second = replicate_example1(4, n=300, seed=5, threads=2)
    np.testing.assert_array_equal(first.fourier, second.fourier)
    np.testing.assert_array_equal(first.gaussian, second.gaussian)
    assert first.fourier.shape == (4,)
    assert first.truth == -5.0
    with pytest.raises(DomainError):
        replicate_example1(0)

