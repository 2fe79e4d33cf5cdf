"""Unit tests for the confidence intervals of the verification harness"""

import math

import numpy as np
import pytest

from levybounds.levy_processes.common_families.stable import StableFamily
from levybounds.levy_processes.simulation.rng_streams import RngStreamSpec
from levybounds.levy_processes.simulation.samplers import sample_stable
from levybounds.levy_processes.verification.lipschitz import LipschitzFunction
from levybounds.levy_processes.verification.statistics import (
    Estimate,
    empirical_median_ci,
    exceedance_ci,
    mean_ci,
    median_ci,
    quantile_ci,
)


def test_quantile_ci_brackets_the_estimate() -> None:
    values = np.random.default_rng(0).standard_normal(5000)
    estimate = quantile_ci(values, 0.9, level=0.9999)
    assert estimate.low <= estimate.value <= estimate.high
    assert estimate.low < 1.2816 < estimate.high
    assert estimate.level == 0.9999


def test_quantile_ci_small_sample_is_unbounded() -> None:
    estimate = quantile_ci(np.arange(5.0), 0.5)
    assert estimate.low == -math.inf
    assert estimate.high == math.inf


def test_median_ci() -> None:
    values = np.random.default_rng(1).standard_cauchy(2000)
    estimate = median_ci(values, level=0.9999)
    assert estimate.value == np.median(values)
    assert estimate.low < 0.0 < estimate.high
    assert estimate.half_width < 0.2
    with pytest.raises(ValueError):
        median_ci(values[:99])


def test_exceedance_ci() -> None:
    estimate = exceedance_ci(0, 100)
    assert estimate.value == 0.0
    assert estimate.low == 0.0
    assert estimate.high == pytest.approx(1.0 - 0.005 ** (1.0 / 100.0), rel=1e-6)
    middle = exceedance_ci(50, 100, level=0.95)
    assert middle.low < 0.5 < middle.high
    with pytest.raises(ValueError):
        exceedance_ci(5, 4)


def test_mean_ci() -> None:
    values = np.random.default_rng(2).normal(loc=3.0, size=10_000)
    estimate = mean_ci(values, level=0.9999)
    assert estimate.low < 3.0 < estimate.high
    assert estimate.half_width < 0.1
    with pytest.raises(ValueError):
        mean_ci(values[:3])


def test_invalid_levels() -> None:
    with pytest.raises(ValueError):
        quantile_ci(np.arange(200.0), 0.5, level=1.0)
    with pytest.raises(ValueError):
        quantile_ci(np.arange(200.0), 1.0)


def test_estimate_as_tuple() -> None:
    assert Estimate(1.0, 0.0, 3.0, 0.9).as_tuple() == (1.0, (0.0, 3.0))
    assert Estimate(1.0, 0.0, 3.0, 0.9).half_width == 1.5


def test_empirical_median_ci_of_cauchy_norm() -> None:
    batch = sample_stable(StableFamily(1.0), 1.0, 4000, RngStreamSpec(8))
    estimate = empirical_median_ci(batch, LipschitzFunction.norm(), level=0.9999)
    assert estimate.low <= math.pi <= estimate.high
