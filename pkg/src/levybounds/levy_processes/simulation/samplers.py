"""
This module samples X_t at a fixed time t, either exactly (symmetric stable laws,
compound Poisson processes) or through the decomposition X_t = Y_t^(R) + Z_t^(R)
into the jumps of size at most R and the compound Poisson part of the larger ones.

The small jumps are simulated down to a cut-off epsilon; the compensated jumps
below epsilon are discarded and their effect is accounted for in the batch
metadata (bias_bound, displacement).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize, stats

from ...exceptions import SamplingError
from ..bounds.solvers import bennett_exponent
from ..common_families.stable import stable_scale
from ..levy_measures import LevyMeasure
from ..radial_parts import PowerLawRadial
from .rng_streams import RngStreamSpec

logger = logging.getLogger(__name__)

CHUNK_SIZE = 4096
DEFAULT_ETA = 1e-2
DEFAULT_LAMBDA = 4.0
DEFAULT_TRUNCATION = 1.0
# factor by which the lower end of the epsilon bracket is shrunk, and how often
_BRACKET_SHRINK = 1e-3
_MAX_SHRINKS = 100


@dataclass
class SampleBatch:
    """Independent realisations of X_t (or of a piece of its decomposition) at a fixed time.

    values has shape (n, d). bias_bound is a probability p and displacement a
    distance delta: with probability at least 1 - p every sampled value is within
    delta of a draw from the exact law, coupled realisation by realisation.
    Exact samplers have p = delta = 0.
    """

    # pylint: disable=too-many-instance-attributes

    values: np.ndarray
    t: float
    family: dict
    rng: dict
    sampler: str
    bias_bound: float = 0.0
    displacement: float = 0.0
    truncation: float | None = None
    epsilon: float | None = None
    discarded_std: float = 0.0
    eta_satisfied: bool = True
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise SamplingError("a sampler produced non-finite values")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    def metadata(self) -> dict:
        """Everything but the values, as plain serialisable data."""
        return {
            "n": self.n,
            "dimension": self.dimension,
            "t": self.t,
            "family": self.family,
            "rng": self.rng,
            "sampler": self.sampler,
            "bias_bound": self.bias_bound,
            "displacement": self.displacement,
            "truncation": self.truncation,
            "epsilon": self.epsilon,
            "discarded_std": self.discarded_std,
            "eta_satisfied": self.eta_satisfied,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class EpsilonChoice:
    epsilon: float
    discarded_std: float
    eta_satisfied: bool


@dataclass(frozen=True)
class EpsilonPolicy:
    """How the cut-off epsilon below which jumps are discarded is chosen.

    By default epsilon is the largest value with sqrt(t V(epsilon)) <= eta R. An
    absolute epsilon overrides eta. When the expected number of simulated jumps
    per sample exceeds max_jumps_per_sample, epsilon is raised until it does not
    and the eta requirement is reported as unmet.

    Args:
        eta (float): the relative size of the discarded part.
        epsilon (float): an absolute cut-off.
        max_jumps_per_sample (float): a cap on the expected jumps per sample.
        lam (float): deviations beyond (1 + lam) sqrt(t V(epsilon)) enter bias_bound.
    """

    eta: float = DEFAULT_ETA
    epsilon: float | None = None
    max_jumps_per_sample: float | None = None
    lam: float = DEFAULT_LAMBDA

    def __post_init__(self) -> None:
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta!r}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.max_jumps_per_sample is not None and not self.max_jumps_per_sample > 0:
            raise ValueError("the jump cap must be positive")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam!r}")

    def choose(self, measure: LevyMeasure, R: float, t: float) -> EpsilonChoice:
        """Chooses epsilon for sampling the jumps of size in (epsilon, R] up to time t."""
        if measure.is_finite_activity():
            return EpsilonChoice(0.0, 0.0, True)
        if self.epsilon is not None:
            epsilon = min(self.epsilon, R)
        else:
            epsilon = self._eta_epsilon(measure, R, t)
        eta_satisfied = math.sqrt(t * measure.V(epsilon)) <= self.eta * R * (1.0 + 1e-9)
        if self.max_jumps_per_sample is not None:
            expected = t * (measure.nu_bar(epsilon) - measure.nu_bar(R))
            if expected > self.max_jumps_per_sample:
                epsilon = self._capped_epsilon(measure, R, t, epsilon)
                eta_satisfied = False
                logger.warning(
                    "jump cap %g binds: epsilon raised to %g, discarded std %g exceeds eta*R=%g",
                    self.max_jumps_per_sample,
                    epsilon,
                    math.sqrt(t * measure.V(epsilon)),
                    self.eta * R,
                )
        return EpsilonChoice(epsilon, math.sqrt(t * measure.V(epsilon)), eta_satisfied)

    def _eta_epsilon(self, measure: LevyMeasure, R: float, t: float) -> float:
        target = (self.eta * R) ** 2 / t
        if measure.V(R) <= target:
            return R
        lower = R
        for _ in range(_MAX_SHRINKS):
            lower *= _BRACKET_SHRINK
            if measure.V(lower) <= target:
                break
        else:
            raise SamplingError(
                f"V(epsilon) does not fall below {target!r}: the epsilon policy is unsatisfiable"
            )
        return optimize.bisect(lambda x: measure.V(x) - target, lower, R, xtol=1e-300, rtol=1e-12)

    def _capped_epsilon(self, measure: LevyMeasure, R: float, t: float, epsilon: float) -> float:
        cap = self.max_jumps_per_sample
        return optimize.bisect(
            lambda x: t * (measure.nu_bar(x) - measure.nu_bar(R)) - cap,
            epsilon,
            R,
            xtol=1e-300,
            rtol=1e-12,
        )

    def contamination(self, discarded_std: float, epsilon: float) -> tuple[float, float]:
        """The probability and the distance by which the discarded jumps can move a sample.

        The discarded part D is a centred process with jumps bounded by epsilon and
        variance s^2 = t V(epsilon), so P(|D| >= (1 + lam) s) <= exp(u - (u + c) log(1 + u/c))
        with u = lam s / epsilon and c = s^2 / epsilon^2.

        Returns:
            tuple[float, float]: (bias_bound, displacement).
        """
        if discarded_std == 0 or epsilon == 0:
            return 0.0, 0.0
        u = self.lam * discarded_std / epsilon
        c = (discarded_std / epsilon) ** 2
        return float(math.exp(bennett_exponent(u, c))), (1.0 + self.lam) * discarded_std


def _sample_chunks(
    draw: Callable[[int, np.random.Generator], np.ndarray],
    n: int,
    dimension: int,
    rng: RngStreamSpec,
    workers: int = 1,
) -> np.ndarray:
    """Draws n rows in chunks of CHUNK_SIZE, chunk j from substream j of rng.

    The result does not depend on the number of workers.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"the number of samples must be a positive integer, got {n!r}")
    sizes = [min(CHUNK_SIZE, n - start) for start in range(0, n, CHUNK_SIZE)]

    def run(index: int) -> np.ndarray:
        return draw(sizes[index], rng.substream_of(index).generator())

    if workers > 1 and len(sizes) > 1:
        logger.debug("sampling %d chunks on %d workers", len(sizes), workers)
        with ThreadPoolExecutor(max_workers=workers) as executor:
            chunks = list(executor.map(run, range(len(sizes))))
    else:
        chunks = [run(index) for index in range(len(sizes))]
    return np.concatenate(chunks).reshape(n, dimension)


def _jump_directions(measure: LevyMeasure, count: int, generator: np.random.Generator) -> np.ndarray:
    if measure.dimension == 1:
        w_minus, w_plus = measure.weights
        upward = generator.random(count) < w_plus / (w_minus + w_plus)
        return np.where(upward, 1.0, -1.0)[:, None]
    gaussians = generator.standard_normal((count, measure.dimension))
    return gaussians / np.linalg.norm(gaussians, axis=1, keepdims=True)


def _compound_draw(
    measure: LevyMeasure, lo: float, hi: float, t: float
) -> Callable[[int, np.random.Generator], np.ndarray]:
    """Sums Poisson many jumps with radii in (lo, hi] per row."""
    top = 0.0 if math.isinf(hi) else measure.nu_bar(hi)
    bottom = measure.mass * measure.radial.activity() if lo == 0 else measure.nu_bar(lo)
    rate = bottom - top

    def draw(size: int, generator: np.random.Generator) -> np.ndarray:
        counts = generator.poisson(t * rate, size)
        total = int(counts.sum())
        radii = measure.radial.sample_shell(lo, hi, 1.0 - generator.random(total))
        jumps = radii[:, None] * _jump_directions(measure, total, generator)
        owner = np.repeat(np.arange(size), counts)
        return np.column_stack(
            [np.bincount(owner, weights=jumps[:, k], minlength=size) for k in range(measure.dimension)]
        )

    return draw


def is_pure_stable(measure: LevyMeasure) -> bool:
    """Whether the measure is an untruncated symmetric power law, which is sampled exactly."""
    radial = measure.radial
    return (
        isinstance(radial, PowerLawRadial)
        and math.isinf(radial.truncation)
        and measure.is_symmetric()
    )


def sample_stable(fam, t: float, n: int, rng: RngStreamSpec, workers: int = 1) -> SampleBatch:
    """Draws n exact samples of X_t for a symmetric stable family.

    One-dimensional laws come from scipy.stats.levy_stable. In dimension d the
    isotropic law is sub-Gaussian: sqrt(W) G with W totally skewed (alpha/2)-stable
    and G centred Gaussian.

    Args:
        fam (StableFamily | LevyMeasure): a symmetric stable family or its measure.
        t (float): the time.
        n (int): the number of samples.
        rng (RngStreamSpec): the random stream.
        workers (int): the number of threads.

    Returns:
        SampleBatch: the samples, with bias_bound = 0.
    """
    measure = getattr(fam, "measure", fam)
    if not is_pure_stable(measure):
        raise ValueError("exact stable sampling needs an untruncated symmetric stable measure")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    alpha = measure.radial.alpha
    scale = stable_scale(measure, t)
    shift = t * measure.drift

    if measure.dimension == 1:

        def draw(size: int, generator: np.random.Generator) -> np.ndarray:
            values = stats.levy_stable.rvs(alpha, 0.0, scale=scale, size=size, random_state=generator)
            return values[:, None] + shift

    else:
        subordinator_scale = math.cos(math.pi * alpha / 4.0) ** (2.0 / alpha)

        def draw(size: int, generator: np.random.Generator) -> np.ndarray:
            mixing = stats.levy_stable.rvs(
                alpha / 2.0, 1.0, scale=subordinator_scale, size=size, random_state=generator
            )
            gaussians = generator.normal(scale=math.sqrt(2.0) * scale, size=(size, measure.dimension))
            return np.sqrt(mixing)[:, None] * gaussians + shift

    values = _sample_chunks(draw, n, measure.dimension, rng, workers)
    return SampleBatch(values, t, measure.describe(), rng.describe(), "stable_exact")


def sample_compound_tail(
    measure: LevyMeasure, R: float, t: float, n: int, rng: RngStreamSpec, workers: int = 1
) -> SampleBatch:
    """Draws n exact samples of Z_t^(R), the sum of the jumps larger than R up to time t.

    Returns an all-zero batch when nu_bar(R) = 0.
    """
    if not (R > 0 and t > 0):
        raise ValueError(f"R and t must be positive, got R={R!r}, t={t!r}")
    measure = getattr(measure, "measure", measure)
    if measure.nu_bar(R) == 0:
        values = np.zeros((n, measure.dimension))
    else:
        values = _sample_chunks(_compound_draw(measure, R, math.inf, t), n, measure.dimension, rng, workers)
    return SampleBatch(values, t, measure.describe(), rng.describe(), "compound_tail", truncation=R)


def sample_truncated_small(
    measure: LevyMeasure,
    R: float,
    t: float,
    n: int,
    rng: RngStreamSpec,
    epsilon_policy: EpsilonPolicy | None = None,
    workers: int = 1,
) -> SampleBatch:
    """Draws n samples of Y_t^(R), the process whose jumps larger than R are removed.

    The jumps in (epsilon, R] are simulated as a compound Poisson sum and the drift
    t E Y_1^(epsilon) is added exactly; the centred jumps below epsilon are dropped.

    Args:
        measure (LevyMeasure): the Levy measure.
        R (float): the truncation radius.
        t (float): the time.
        n (int): the number of samples.
        rng (RngStreamSpec): the random stream.
        epsilon_policy (EpsilonPolicy): how epsilon is chosen.
        workers (int): the number of threads.

    Returns:
        SampleBatch: the samples with epsilon, the discarded standard deviation and the contamination budget.
    """
    if not (R > 0 and t > 0):
        raise ValueError(f"R and t must be positive, got R={R!r}, t={t!r}")
    measure = getattr(measure, "measure", measure)
    policy = EpsilonPolicy() if epsilon_policy is None else epsilon_policy
    choice = policy.choose(measure, R, t)
    epsilon = choice.epsilon
    drift = t * measure.truncated_mean(epsilon)
    has_jumps = epsilon < R and measure.nu_bar(epsilon) > measure.nu_bar(R)
    if has_jumps:
        jumps = _compound_draw(measure, epsilon, R, t)

        def draw(size: int, generator: np.random.Generator) -> np.ndarray:
            return jumps(size, generator) + drift

        values = _sample_chunks(draw, n, measure.dimension, rng, workers)
    else:
        values = np.tile(drift, (n, 1))
    bias_bound, displacement = policy.contamination(choice.discarded_std, epsilon)
    batch = SampleBatch(
        values,
        t,
        measure.describe(),
        rng.describe(),
        "truncated_small" if epsilon > 0 else "truncated_small_exact",
        bias_bound=bias_bound,
        displacement=displacement,
        truncation=R,
        epsilon=epsilon,
        discarded_std=choice.discarded_std,
        eta_satisfied=choice.eta_satisfied,
    )
    if not choice.eta_satisfied:
        batch.notes.append("the jump cap prevented sqrt(t V(epsilon)) <= eta R")
    return batch


def sample_process(
    source,
    t: float,
    n: int,
    rng: RngStreamSpec,
    R: float = DEFAULT_TRUNCATION,
    epsilon_policy: EpsilonPolicy | None = None,
    workers: int = 1,
) -> SampleBatch:
    """Draws n samples of X_t.

    Symmetric untruncated stable laws are sampled exactly; anything else as
    Y_t^(R) + Z_t^(R), from substreams 0 and 1 of rng.

    Args:
        source (LevyMeasure | family): the measure, or a family holding one.
        t (float): the time.
        n (int): the number of samples.
        rng (RngStreamSpec): the random stream.
        R (float): the truncation radius of the decomposition.
        epsilon_policy (EpsilonPolicy): how the small-jump cut-off is chosen.
        workers (int): the number of threads.

    Returns:
        SampleBatch: the samples, with the small-jump contamination budget.
    """
    measure = getattr(source, "measure", source)
    if is_pure_stable(measure):
        return sample_stable(measure, t, n, rng, workers)
    small = sample_truncated_small(measure, R, t, n, rng.substream_of(0), epsilon_policy, workers)
    large = sample_compound_tail(measure, R, t, n, rng.substream_of(1), workers)
    return SampleBatch(
        small.values + large.values,
        t,
        measure.describe(),
        rng.describe(),
        "decomposition",
        bias_bound=small.bias_bound,
        displacement=small.displacement,
        truncation=R,
        epsilon=small.epsilon,
        discarded_std=small.discarded_std,
        eta_satisfied=small.eta_satisfied,
        notes=small.notes,
    )
