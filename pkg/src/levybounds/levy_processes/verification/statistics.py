"""
This module implements the confidence intervals of the verification harness: distribution-free
order-statistic intervals for quantiles, exact binomial intervals for exceedance frequencies and
batch-means intervals for expectations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

DEFAULT_LEVEL = 0.99
MIN_MEDIAN_SAMPLES = 100
DEFAULT_BATCHES = 32


@dataclass(frozen=True)
class Estimate:
    """A point estimate with a two-sided confidence interval at the given level."""

    value: float
    low: float
    high: float
    level: float

    @property
    def half_width(self) -> float:
        return 0.5 * (self.high - self.low)

    def as_tuple(self) -> tuple[float, tuple[float, float]]:
        return self.value, (self.low, self.high)


def _check_level(level: float) -> None:
    if not 0 < level < 1:
        raise ValueError(f"the confidence level must lie in (0, 1), got {level!r}")


def quantile_ci(values, prob: float, level: float = DEFAULT_LEVEL) -> Estimate:
    """Distribution-free confidence interval for the prob-quantile of the law of values.

    The number of samples below the quantile is Binomial(n, prob), so the order
    statistics at its level-(1 - level)/2 and (1 + level)/2 quantiles bracket it
    with probability at least level.

    Args:
        values (numpy.ndarray): a one-dimensional sample.
        prob (float): the quantile level, in (0, 1).
        level (float): the confidence level.

    Returns:
        Estimate: the empirical quantile and the interval; the ends are infinite when
        the sample is too small to bracket the quantile.
    """
    _check_level(level)
    if not 0 < prob < 1:
        raise ValueError(f"the quantile level must lie in (0, 1), got {prob!r}")
    ordered = np.sort(np.asarray(values, dtype=float).reshape(-1))
    n = ordered.size
    tail = 0.5 * (1.0 - level)
    # with B ~ Binomial(n, prob): P(B < lo) <= tail and P(B >= hi) <= tail
    lo = int(stats.binom.ppf(tail, n, prob))
    hi = int(stats.binom.isf(tail, n, prob)) + 1
    low = ordered[lo - 1] if lo >= 1 else -math.inf
    high = ordered[hi - 1] if hi <= n else math.inf
    return Estimate(float(np.quantile(ordered, prob)), float(low), float(high), level)


def median_ci(values, level: float = DEFAULT_LEVEL) -> Estimate:
    """The sample median with its order-statistic confidence interval.

    Raises:
        ValueError: with fewer than 100 samples.
    """
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size < MIN_MEDIAN_SAMPLES:
        raise ValueError(
            f"a median confidence interval needs at least {MIN_MEDIAN_SAMPLES} samples, got {values.size}"
        )
    estimate = quantile_ci(values, 0.5, level)
    return Estimate(float(np.median(values)), estimate.low, estimate.high, level)


def empirical_median_ci(batch, f, level: float = DEFAULT_LEVEL) -> Estimate:
    """The median of f over a SampleBatch, with its order-statistic confidence interval."""
    return median_ci(f(batch.values), level)


def exceedance_ci(count: int, n: int, level: float = DEFAULT_LEVEL) -> Estimate:
    """The frequency count/n with its exact (Clopper-Pearson) confidence interval."""
    _check_level(level)
    if not 0 <= count <= n or n < 1:
        raise ValueError(f"need 0 <= count <= n and n >= 1, got count={count!r}, n={n!r}")
    interval = stats.binomtest(int(count), int(n)).proportion_ci(confidence_level=level, method="exact")
    return Estimate(count / n, float(interval.low), float(interval.high), level)


def mean_ci(values, level: float = DEFAULT_LEVEL, batches: int = DEFAULT_BATCHES) -> Estimate:
    """The sample mean with a batch-means Student-t confidence interval.

    The sample is cut into equal consecutive batches; the spread of the batch means
    is less sensitive to heavy tails than the plain sample variance.
    """
    _check_level(level)
    values = np.asarray(values, dtype=float).reshape(-1)
    batches = min(int(batches), values.size // 2)
    if batches < 2:
        raise ValueError(f"a mean confidence interval needs at least 4 samples, got {values.size}")
    size = values.size // batches
    means = values[: batches * size].reshape(batches, size).mean(axis=1)
    center = float(means.mean())
    spread = float(means.std(ddof=1)) / math.sqrt(batches)
    half_width = float(stats.t.ppf(0.5 * (1.0 + level), batches - 1)) * spread
    return Estimate(center, center - half_width, center + half_width, level)
