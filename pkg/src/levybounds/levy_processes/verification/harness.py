"""
This module checks the median, concentration and mean bounds against Monte Carlo samples.

Every check produces a VerificationReport. The accounting is conservative throughout:

- the Monte Carlo error enters through exact binomial or order-statistic intervals,
- the small-jump sampler is coupled to the exact law: with probability at least
  1 - bias_bound each sample lies within displacement of an exact draw, so
  displacement is folded into the checked thresholds and bias_bound into the
  probabilities,
- centers are estimated on batches independent of the tail batches, and their
  interval half-width (plus sqrt(t V(epsilon)), which bounds the mean shift caused
  by the discarded jumps) is folded into the thresholds.

A check FAILs only when the lower confidence limit, after all slack, exceeds the
bound. It PASSes when the upper confidence limit, after all slack, stays below the
bound, and is INCONCLUSIVE otherwise or when a hypothesis of the bound fails.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ...exceptions import HypothesisError, InfiniteMean, RootFindingError
from ..bounds.reports import MEAN_LOWER_FACTOR, MEAN_UPPER_FACTOR, SYMMETRIC_MEAN_UPPER_FACTOR
from ..bounds.solvers import h_c, x0_MR
from ..bounds.theorems import median_bound, thm2_tail_bound, thm2_threshold, thm3_threshold
from ..levy_measures import ScaleFunctions
from ..simulation.rng_streams import RngStreamSpec
from ..simulation.samplers import (
    DEFAULT_TRUNCATION,
    EpsilonPolicy,
    SampleBatch,
    sample_process,
    sample_truncated_small,
)
from .lipschitz import LipschitzFunction
from .statistics import DEFAULT_LEVEL, exceedance_ci, mean_ci, quantile_ci

logger = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"
VERDICTS = (PASS, FAIL, INCONCLUSIVE)

DEFAULT_JUMP_CAP = 1000
# points x' + s (threshold - x') of the pointwise tail curve
CURVE_POINTS = (0.5, 0.75, 1.0, 1.5, 2.0)
SANDWICH_RTOL = 1e-9


def default_policy() -> EpsilonPolicy:
    return EpsilonPolicy(max_jumps_per_sample=DEFAULT_JUMP_CAP)


@dataclass
class VerificationReport:
    """The outcome of one Monte Carlo check of one bound.

    bound is the theoretical bound (a deviation for the median check, a probability
    for the tail checks, the upper mean endpoint for the mean check), threshold the
    deviation at which a tail is checked, empirical the statistic compared with the
    bound and [ci_low, ci_high] its confidence interval.
    """

    # pylint: disable=too-many-instance-attributes

    theorem: str
    family: str
    f: str
    t: float
    n: int
    seed: int
    stream: int
    c: float | None = None
    q: float | None = None
    threshold: float | None = None
    bound: float | None = None
    empirical: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    level: float = DEFAULT_LEVEL
    mc_slack: float = 0.0
    bias_slack: float = 0.0
    displacement: float = 0.0
    center_slack: float = 0.0
    verdict: str = INCONCLUSIVE
    notes: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def total_slack(self) -> float:
        return self.mc_slack + self.bias_slack + self.center_slack

    def as_dict(self) -> dict:
        record = asdict(self)
        record["total_slack"] = self.total_slack
        return record


@dataclass(frozen=True)
class TailCheck:
    """One tail probability checked against a bound, with the slack folded in."""

    side: str
    x: float
    bound: float
    empirical: float
    ci_low: float
    ci_high: float
    upper_limit: float
    lower_limit: float
    verdict: str


def family_label(source) -> str:
    measure = getattr(source, "measure", source)
    return measure.label or repr(measure.radial)


def _scale_functions(source) -> ScaleFunctions:
    sf = getattr(source, "scale_functions", None)
    return sf if sf is not None else ScaleFunctions(source)


def _report(theorem: str, source, f: LipschitzFunction, t: float, n: int, rng: RngStreamSpec, **kwargs):
    return VerificationReport(
        theorem=theorem,
        family=family_label(source),
        f=f.describe(),
        t=t,
        n=n,
        seed=rng.seed,
        stream=rng.stream,
        **kwargs,
    )


def _inconclusive(report: VerificationReport, error: Exception) -> VerificationReport:
    report.verdict = INCONCLUSIVE
    report.notes.append(str(error))
    logger.warning("%s on %s is inconclusive: %s", report.theorem, report.family, error)
    return report


def _record_sampler(report: VerificationReport, batch: SampleBatch) -> None:
    report.bias_slack = max(report.bias_slack, batch.bias_bound)
    report.displacement = max(report.displacement, batch.displacement)
    report.extras.setdefault("samplers", []).append(
        {"sampler": batch.sampler, "epsilon": batch.epsilon, "eta_satisfied": batch.eta_satisfied}
    )
    report.notes.extend(batch.notes)


def check_tail(
    deviations: np.ndarray,
    x: float,
    bound: float,
    shift: float,
    bias_bound: float,
    side: str = "upper",
    level: float = DEFAULT_LEVEL,
) -> TailCheck:
    """Checks P(D >= x) <= bound (side "upper") or P(D <= -x) <= bound (side "lower").

    deviations are approximate samples of D; shift bounds how far the exact D can be
    from them except on an event of probability bias_bound.
    """
    signed = deviations if side == "upper" else -deviations
    n = signed.size
    at_x = exceedance_ci(int(np.count_nonzero(signed >= x)), n, level)
    upper_limit = exceedance_ci(int(np.count_nonzero(signed >= x - shift)), n, level).high + bias_bound
    lower_limit = exceedance_ci(int(np.count_nonzero(signed >= x + shift)), n, level).low - bias_bound
    if upper_limit <= bound:
        verdict = PASS
    elif lower_limit > bound:
        verdict = FAIL
    else:
        verdict = INCONCLUSIVE
    return TailCheck(side, x, bound, at_x.value, at_x.low, at_x.high, upper_limit, lower_limit, verdict)


def combine_verdicts(verdicts) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if verdicts and all(verdict == PASS for verdict in verdicts):
        return PASS
    return INCONCLUSIVE


def _fill_from_tails(report: VerificationReport, checks: list[TailCheck]) -> None:
    worst = max(checks, key=lambda check: check.upper_limit)
    report.empirical = worst.empirical
    report.ci_low = worst.ci_low
    report.ci_high = worst.ci_high
    report.mc_slack = worst.ci_high - worst.empirical
    report.verdict = combine_verdicts(check.verdict for check in checks)
    report.extras["tails"] = [asdict(check) for check in checks]


def verify_thm1(
    family,
    t: float,
    c: float,
    f: LipschitzFunction,
    n: int,
    rng: RngStreamSpec,
    level: float = DEFAULT_LEVEL,
    epsilon_policy: EpsilonPolicy | None = None,
    workers: int = 1,
    bound_scale: float = 1.0,
) -> VerificationReport:
    """Checks |m f(X_t) - f(0)| against the median bound.

    The median interval is taken between the order-statistic limits of the
    (1/2 - p) and (1/2 + p) quantiles, p the sampler contamination, widened by the
    sampler displacement.

    Args:
        family (family | LevyMeasure): the process.
        t (float): the time.
        c (float): the parameter of the median bound.
        f (LipschitzFunction): the 1-Lipschitz function.
        n (int): the number of samples.
        rng (RngStreamSpec): the random stream of the check.
        level (float): the confidence level.
        epsilon_policy (EpsilonPolicy): the small-jump cut-off policy.
        workers (int): the number of sampling threads.
        bound_scale (float): multiplies the bound; values below 1 test the harness itself.

    Returns:
        VerificationReport: the check, INCONCLUSIVE when t nu_bar(h_c(t)) >= 1/2.
    """
    measure = getattr(family, "measure", family)
    sf = _scale_functions(family)
    report = _report("thm1", family, f, t, n, rng, c=c, level=level)
    try:
        bound = median_bound(measure, sf, c, t)
    except (HypothesisError, RootFindingError) as error:
        return _inconclusive(report, error)
    report.bound = bound_scale * bound.value
    report.extras.update(
        h=bound.h,
        condition_3_value=bound.condition_value,
        standard=bound.standard,
        refined=bound.refined,
        refined_used=bound.refined_used,
        E_c=bound.E_c,
    )
    if bound_scale != 1.0:
        report.notes.append(f"bound scaled by {bound_scale!r}")

    policy = default_policy() if epsilon_policy is None else epsilon_policy
    batch = sample_process(family, t, n, rng, DEFAULT_TRUNCATION, policy, workers)
    _record_sampler(report, batch)
    values = f(batch.values)
    origin = f.at_origin(measure.dimension)
    p, delta = batch.bias_bound, batch.displacement
    median = quantile_ci(values, 0.5, level)
    low = quantile_ci(values, max(0.5 - p, 1e-12), level).low - delta
    high = quantile_ci(values, min(0.5 + p, 1.0 - 1e-12), level).high + delta

    deviation = abs(median.value - origin)
    if low <= origin <= high:
        deviation_low = 0.0
    else:
        deviation_low = min(abs(low - origin), abs(high - origin))
    deviation_high = max(abs(low - origin), abs(high - origin))
    report.empirical = deviation
    report.ci_low = deviation_low
    report.ci_high = deviation_high
    report.mc_slack = deviation_high - deviation
    report.extras["median"] = median.value
    if deviation_high <= report.bound:
        report.verdict = PASS
    elif deviation_low > report.bound:
        report.verdict = FAIL
    else:
        report.verdict = INCONCLUSIVE
    return report


def verify_thm2(
    family,
    t: float,
    q: float,
    f: LipschitzFunction,
    n: int,
    rng: RngStreamSpec,
    level: float = DEFAULT_LEVEL,
    epsilon_policy: EpsilonPolicy | None = None,
    workers: int = 1,
    curve: bool = True,
) -> VerificationReport:
    """Checks both tails of f(X_t) - m(t) at the concentration threshold for level q.

    The center m(t) = E f(Y_t^(h)), h = h_{q/2A}(t), is estimated on substream 0;
    X_t is sampled on substream 1 with the decomposition at R = h. With curve set,
    the pointwise bound is also checked at x' = h and x = h + s (threshold - h).
    """
    measure = getattr(family, "measure", family)
    sf = _scale_functions(family)
    report = _report("thm2", family, f, t, n, rng, q=q, level=level)
    A = sf.A_constant()
    try:
        threshold = thm2_threshold(sf, q, t, A)
    except (HypothesisError, RootFindingError) as error:
        return _inconclusive(report, error)
    c = q / (2.0 * A)
    h = h_c(sf, c, t)
    report.c = c
    report.threshold = threshold
    report.bound = q
    report.extras.update(A=A, h=h)

    policy = default_policy() if epsilon_policy is None else epsilon_policy
    center_batch = sample_truncated_small(measure, h, t, n, rng.substream_of(0), policy, workers)
    center = mean_ci(f(center_batch.values), level)
    report.center_slack = center.half_width + center_batch.discarded_std
    report.extras["center"] = center.value
    _record_sampler(report, center_batch)

    batch = sample_process(family, t, n, rng.substream_of(1), h, policy, workers)
    _record_sampler(report, batch)
    deviations = f(batch.values) - center.value
    shift = report.center_slack + batch.displacement
    checks = [
        check_tail(deviations, threshold, q, shift, batch.bias_bound, side, level)
        for side in ("upper", "lower")
    ]
    _fill_from_tails(report, checks)

    if curve and threshold > h:
        points = []
        for s in CURVE_POINTS:
            x = h + s * (threshold - h)
            pointwise = thm2_tail_bound(sf, c, t, x, h, A)
            check = check_tail(deviations, x, pointwise, shift, batch.bias_bound, "upper", level)
            points.append(asdict(check))
        report.extras["curve"] = points
        report.verdict = combine_verdicts([report.verdict, *(point["verdict"] for point in points)])
    return report


def verify_thm3(
    family,
    t: float,
    q: float,
    f: LipschitzFunction,
    n: int,
    rng: RngStreamSpec,
    level: float = DEFAULT_LEVEL,
    epsilon_policy: EpsilonPolicy | None = None,
    workers: int = 1,
) -> VerificationReport:
    """Checks both tails of f(X_t) - E f(X_t) at the mean-concentration threshold for level q.

    E f(X_t) is estimated on substream 0 and the tails on substream 1.

    Raises:
        InfiniteMean: when the tail first moment of the measure is infinite.
    """
    measure = getattr(family, "measure", family)
    sf = _scale_functions(family)
    if math.isinf(measure.M_tail(1.0)):
        raise InfiniteMean(f"{family_label(family)} has no finite mean")
    report = _report("thm3", family, f, t, n, rng, q=q, level=level)
    if not measure.is_centered():
        return _inconclusive(report, HypothesisError("the process is not centered"))
    A = sf.A_constant()
    K = sf.K_constant()
    try:
        threshold = thm3_threshold(sf, q, t, A, K)
    except (HypothesisError, RootFindingError) as error:
        return _inconclusive(report, error)
    c = q / (2.0 * A)
    h = h_c(sf, c, t)
    report.c = c
    report.threshold = threshold
    report.bound = q
    report.extras.update(A=A, K=K, h=h)

    policy = default_policy() if epsilon_policy is None else epsilon_policy
    center_batch = sample_process(family, t, n, rng.substream_of(0), h, policy, workers)
    center = mean_ci(f(center_batch.values), level)
    report.center_slack = center.half_width + center_batch.discarded_std
    report.extras["center"] = center.value
    _record_sampler(report, center_batch)

    batch = sample_process(family, t, n, rng.substream_of(1), h, policy, workers)
    _record_sampler(report, batch)
    deviations = f(batch.values) - center.value
    shift = report.center_slack + batch.displacement
    checks = [
        check_tail(deviations, threshold, q, shift, batch.bias_bound, side, level)
        for side in ("upper", "lower")
    ]
    _fill_from_tails(report, checks)
    return report


def verify_MR(
    family,
    t: float,
    n: int,
    rng: RngStreamSpec,
    level: float = DEFAULT_LEVEL,
    epsilon_policy: EpsilonPolicy | None = None,
    workers: int = 1,
) -> VerificationReport:
    """Checks x0/4 <= E|X_t| <= (17/8) x0, with 5/4 for symmetric processes, and h_1 <= x0 <= h_{1/(1+K)}."""
    measure = getattr(family, "measure", family)
    sf = _scale_functions(family)
    f = LipschitzFunction.norm()
    report = _report("MR", family, f, t, n, rng, level=level)
    if not measure.is_centered():
        return _inconclusive(report, HypothesisError("the process is not centered or has no finite mean"))
    try:
        x0 = x0_MR(sf, t)
    except (HypothesisError, RootFindingError) as error:
        return _inconclusive(report, error)
    upper_factor = SYMMETRIC_MEAN_UPPER_FACTOR if measure.is_process_symmetric() else MEAN_UPPER_FACTOR
    lower, upper = MEAN_LOWER_FACTOR * x0, upper_factor * x0
    report.threshold = lower
    report.bound = upper
    report.extras.update(x0=x0, mean_lower=lower, mean_upper=upper)

    sandwich = PASS
    K = sf.K_constant()
    if math.isfinite(K):
        h_1 = h_c(sf, 1.0, t)
        h_K = h_c(sf, 1.0 / (1.0 + K), t)
        holds = bool(h_1 * (1.0 - SANDWICH_RTOL) <= x0 <= h_K * (1.0 + SANDWICH_RTOL))
        report.extras.update(K=K, h_1=h_1, h_sandwich=h_K, sandwich_holds=holds)
        if not holds:
            sandwich = FAIL
            report.notes.append(f"h_1={h_1!r} <= x0={x0!r} <= h_(1/(1+K))={h_K!r} fails")
    else:
        report.notes.append("the constant K is infinite: the h-sandwich is not checked")

    policy = default_policy() if epsilon_policy is None else epsilon_policy
    batch = sample_process(family, t, n, rng, DEFAULT_TRUNCATION, policy, workers)
    _record_sampler(report, batch)
    mean = mean_ci(f(batch.values), level)
    bias = batch.discarded_std
    report.empirical = mean.value
    report.ci_low = mean.low
    report.ci_high = mean.high
    report.mc_slack = mean.half_width
    report.center_slack = bias
    if mean.low - bias >= lower and mean.high + bias <= upper:
        verdict = PASS
    elif mean.high + bias < lower or mean.low - bias > upper:
        verdict = FAIL
    else:
        verdict = INCONCLUSIVE
    report.verdict = combine_verdicts([verdict, sandwich])
    return report
