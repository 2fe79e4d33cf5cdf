"""
This module evaluates the median, concentration and mean-fluctuation bounds for
1-Lipschitz functions of a Levy process X_t.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ...exceptions import ConditionViolated, InfiniteMean
from ..levy_measures import LevyMeasure, ScaleFunctions
from .solvers import bennett_exponent, g_c, h_c

logger = logging.getLogger(__name__)

STANDARD_CONDITION = 0.25
REFINED_CONDITION = 0.5
# boundary cases such as t nu_bar(h) = 1/4 for stable laws must survive rounding
CONDITION_RTOL = 1e-9


@dataclass(frozen=True)
class MedianBound:
    """The bound on |m f(X_t) - f(0)| for any median m f(X_t) and 1-Lipschitz f."""

    c: float
    t: float
    h: float
    condition_value: float
    g_quarter: float
    E_c: float
    standard: float | None
    refined: float
    refined_used: bool

    @property
    def value(self) -> float:
        """The bound actually claimed: standard when it applies, otherwise refined."""
        return self.refined if self.refined_used else self.standard


def E_c(measure: LevyMeasure, sf: ScaleFunctions, c: float, t: float) -> float:
    """Computes E_c(t) = t |E Y_1^(h)|, h = h_c(t), the drift of the truncated process."""
    h = h_c(sf, c, t)
    return t * float(np.linalg.norm(measure.truncated_mean(h, sf.rtol)))


def median_bound(
    measure: LevyMeasure,
    sf: ScaleFunctions,
    c: float,
    t: float,
    refined: bool = False,
) -> MedianBound:
    """Bounds |m f(X_t) - f(0)| for every median and every 1-Lipschitz f.

    The standard bound h(1 + 3 g_c(1/4)) + E_c(t) needs t nu_bar(h) <= 1/4; the refined
    one, h(1 + g_c(1/4) + 2 g_c(1/2 - t nu_bar(h))) + E_c(t), only t nu_bar(h) < 1/2.

    Args:
        measure (LevyMeasure): the Levy measure and drift.
        sf (ScaleFunctions): its scale functions.
        c (float): the parameter c > 0.
        t (float): the time t > 0.
        refined (bool): claim the refined bound even when the standard one applies.

    Raises:
        ConditionViolated: when t nu_bar(h_c(t)) >= 1/2.

    Returns:
        MedianBound: both forms, the value of the condition and which form is claimed.
    """
    h = h_c(sf, c, t)
    condition_value = t * sf.nu_bar(h)
    if condition_value >= REFINED_CONDITION:
        raise ConditionViolated(
            "median_regime", condition_value, "t*nu_bar(h_c(t)) must be below 1/2 even for the refined bound"
        )
    g_quarter = g_c(c, 0.25)
    drift_term = t * float(np.linalg.norm(measure.truncated_mean(h, sf.rtol)))
    standard = None
    if condition_value <= STANDARD_CONDITION * (1.0 + CONDITION_RTOL):
        standard = h * (1.0 + 3.0 * g_quarter) + drift_term
    refined_value = h * (1.0 + g_quarter + 2.0 * g_c(c, 0.5 - condition_value)) + drift_term
    return MedianBound(
        c=c,
        t=t,
        h=h,
        condition_value=condition_value,
        g_quarter=g_quarter,
        E_c=drift_term,
        standard=standard,
        refined=refined_value,
        refined_used=refined or standard is None,
    )


def scan_median_bound(
    measure: LevyMeasure, sf: ScaleFunctions, t: float, c_grid
) -> list[MedianBound | None]:
    """Evaluates the median bound over a grid of c, None where the condition fails.

    No claim is made that the grid minimum is optimal.
    """
    bounds = []
    for c in c_grid:
        try:
            bounds.append(median_bound(measure, sf, float(c), t))
        except ConditionViolated as error:
            logger.debug("c=%g skipped: %s", c, error)
            bounds.append(None)
    return bounds


def _check_A(A: float) -> None:
    if not (A > 0 and math.isfinite(A)):
        raise ConditionViolated("tail_ratio_A", A, "a finite positive constant A is required")


def thm2_tail_bound(
    sf: ScaleFunctions, c: float, t: float, x: float, x_prime: float, A: float
) -> float:
    """Bounds P(f(X_t) - m(c,t) >= x) and P(f(X_t) - m(c,t) <= -x) for x > x' > 0.

    The bound is A c nu_bar(x')/nu_bar(h) + exp(u - (u + c) log(1 + u/c)) with
    h = h_c(t) and u = (x - x')/h.

    Raises:
        ValueError: if x <= x' or nu_bar(h) = 0 < nu_bar(x').
        ConditionViolated: if nu_bar(R) <= A V(R)/R^2 fails at R = h.
    """
    if not 0 < x_prime < x:
        raise ValueError(f"the bound needs x > x' > 0, got x={x!r}, x'={x_prime!r}")
    _check_A(A)
    h = h_c(sf, c, t)
    tail_at_h = sf.nu_bar(h)
    tail_at_x_prime = sf.nu_bar(x_prime)
    if tail_at_h == 0 and tail_at_x_prime > 0:
        raise ValueError("nu_bar(h_c(t)) vanishes: the ratio nu_bar(x')/nu_bar(h) is undefined")
    if not sf.certifies_A(A, h):
        raise ConditionViolated("tail_ratio_A", sf.nu_bar(h) * h**2 / sf.V(h), f"at R=h_c(t)={h!r}")
    u = (x - x_prime) / h
    # no jumps beyond x'
    jump_term = 0.0 if tail_at_x_prime == 0 else A * c * tail_at_x_prime / tail_at_h
    return jump_term + math.exp(bennett_exponent(u, c))


def thm2_threshold(sf: ScaleFunctions, q: float, t: float, A: float) -> float:
    """Computes [1 + g_{q/2A}(q/2)] h_{q/2A}(t), beyond which both tails of f(X_t) - m(t) are <= q.

    Raises:
        ValueError: if q is not in (0, 1].
        ConditionViolated: if nu_bar(R) <= A V(R)/R^2 fails at R = h_{q/2A}(t).
    """
    if not 0 < q <= 1:
        raise ValueError(f"q must lie in (0, 1], got {q!r}")
    _check_A(A)
    c = q / (2.0 * A)
    h = h_c(sf, c, t)
    if not sf.certifies_A(A, h):
        raise ConditionViolated("tail_ratio_A", sf.nu_bar(h) * h**2 / sf.V(h), f"at R=h_(q/2A)(t)={h!r}")
    return (1.0 + g_c(c, q / 2.0)) * h


def thm3_tail_bound(b_param: float, c: float, A: float) -> float:
    """Computes A c + exp(b - (b + c) log(1 + b/c)).

    This bounds P(f(X_t) - E f(X_t) >= (b + cK) h_c(t)).
    """
    if not (b_param > 0 and c > 0):
        raise ValueError(f"b and c must be positive, got b={b_param!r}, c={c!r}")
    _check_A(A)
    return A * c + math.exp(bennett_exponent(b_param, c))


def thm3_threshold(sf: ScaleFunctions, q: float, t: float, A: float, K_const: float) -> float:
    """Computes [qK/2A + g_{q/2A}(q/2)] h_{q/2A}(t), beyond which P(f(X_t) - E f(X_t) >= x) <= q.

    Raises:
        InfiniteMean: when K is infinite.
        ConditionViolated: when nu_bar(R) <= A V(R)/R^2 or M(R) <= K V(R)/R fails at R = h_{q/2A}(t).
    """
    if not 0 < q <= 1:
        raise ValueError(f"q must lie in (0, 1], got {q!r}")
    _check_A(A)
    if math.isinf(K_const):
        raise InfiniteMean("the constant K of M(R) <= K V(R)/R is infinite")
    c = q / (2.0 * A)
    h = h_c(sf, c, t)
    if not sf.certifies_A(A, h):
        raise ConditionViolated("tail_ratio_A", sf.nu_bar(h) * h**2 / sf.V(h), f"at R=h_(q/2A)(t)={h!r}")
    if not sf.certifies_K(K_const, h):
        raise ConditionViolated("mean_ratio_K", sf.M_tail(h) * h / sf.V(h), f"at R=h_(q/2A)(t)={h!r}")
    return (c * K_const + g_c(c, q / 2.0)) * h


def truncated_profile_H(sf: ScaleFunctions, R: float, t: float, x: float) -> float:
    """Computes H^(R)(x) = exp(B(x/2R, tV(R)/R^2)), B the Bennett exponent.

    This is the median concentration profile of the process with jumps larger than R removed.
    """
    if not (R > 0 and t > 0):
        raise ValueError(f"R and t must be positive, got R={R!r}, t={t!r}")
    if x < 0:
        raise ValueError(f"the deviation must be nonnegative, got {x!r}")
    variance_ratio = t * sf.V(R) / R**2
    if variance_ratio == 0:
        raise ValueError("V(R) vanishes: the profile is degenerate")
    return math.exp(bennett_exponent(x / (2.0 * R), variance_ratio))


def truncated_profile_inverse(sf: ScaleFunctions, R: float, t: float, y: float) -> float:
    """Computes I^(R)(y) = sup{x >= 0 : H^(R)(x) >= y} by bisection on H^(R)."""
    if not 0 < y <= 1:
        raise ValueError(f"y must lie in (0, 1], got {y!r}")
    if y == 1:
        return 0.0
    target = math.log(y)
    variance_ratio = t * sf.V(R) / R**2

    def residual(x: float) -> float:
        return bennett_exponent(x / (2.0 * R), variance_ratio) - target

    upper = 2.0 * R
    while residual(upper) > 0:
        upper *= 2.0
    return optimize.bisect(residual, 0.0, upper, xtol=1e-300, rtol=1e-13, maxiter=400)
