"""
This module implements the symmetric truncated stable family nu(dx) = K |x|^(-1-alpha) 1{|x| <= M} dx
and its closed-form scale functions, median prefactor and tail bounds.
"""

from __future__ import annotations

import math

from ..bounds.solvers import bennett_exponent, g_c
from ..levy_measures import LevyMeasure, ScaleFunctions
from ..radial_parts import PowerLawRadial


class TruncatedStableFamily:
    """The real symmetric truncated stable family.

    Args:
        alpha (float): the index, strictly inside (0, 2).
        intensity_K (float): the intensity K > 0.
        truncation_M (float): the truncation radius M > 0.
    """

    family = "truncated_stable"
    dimension = 1

    def __init__(self, alpha: float, intensity_K: float = 1.0, truncation_M: float = 1.0) -> None:
        if not 0 < alpha < 2:
            raise ValueError(f"alpha must lie strictly inside (0, 2), got {alpha!r}")
        if not (intensity_K > 0 and truncation_M > 0):
            raise ValueError("the intensity K and the truncation M must be positive")
        if math.isinf(truncation_M):
            raise ValueError("use StableFamily for an untruncated measure")
        self.alpha = float(alpha)
        self.intensity_K = float(intensity_K)
        self.truncation_M = float(truncation_M)

        # properties
        self._measure = None
        self._scale_functions = None

    def __repr__(self) -> str:
        return (
            f"TruncatedStableFamily(alpha={self.alpha!r}, intensity_K={self.intensity_K!r}, "
            f"truncation_M={self.truncation_M!r})"
        )

    @property
    def measure(self) -> LevyMeasure:
        """Fetches the Levy measure"""
        if self._measure is None:
            self._measure = LevyMeasure(
                PowerLawRadial(self.alpha, self.truncation_M),
                weights=(self.intensity_K, self.intensity_K),
                label=(
                    f"truncated_stable(alpha={self.alpha:g}, K={self.intensity_K:g}, "
                    f"M={self.truncation_M:g})"
                ),
            )
            return self._measure
        return self._measure

    @property
    def scale_functions(self) -> ScaleFunctions:
        """Fetches the scale functions"""
        if self._scale_functions is None:
            self._scale_functions = ScaleFunctions(self.measure)
            return self._scale_functions
        return self._scale_functions

    def is_pure(self) -> bool:
        return False

    def describe(self) -> dict:
        return {
            "family": self.family,
            "alpha": self.alpha,
            "intensity": self.intensity_K,
            "truncation": self.truncation_M,
        }


def regime_switch_time(fam: TruncatedStableFamily, c: float) -> float:
    """The time t* = (2 - alpha) c M^alpha / 2K where h_c(t) reaches M."""
    return (2.0 - fam.alpha) * c * fam.truncation_M**fam.alpha / (2.0 * fam.intensity_K)


def trunc_h(fam: TruncatedStableFamily, c: float, t: float) -> float:
    """Closed form h_c(t): (2Kt/((2-alpha)c))^(1/alpha) up to t*, then (2K M^(2-alpha) t/((2-alpha)c))^(1/2)."""
    if not (c > 0 and t > 0):
        raise ValueError(f"c and t must be positive, got c={c!r}, t={t!r}")
    K, M, alpha = fam.intensity_K, fam.truncation_M, fam.alpha
    if t <= regime_switch_time(fam, c):
        return (2.0 * K * t / ((2.0 - alpha) * c)) ** (1.0 / alpha)
    return math.sqrt(2.0 * K * M ** (2.0 - alpha) * t / ((2.0 - alpha) * c))


def median_c(alpha: float) -> float:
    """The parameter c = alpha / 4(2 - alpha) used for the median prefactor, i.e. c = 1/4A."""
    return alpha / (4.0 * (2.0 - alpha))


def H_alpha(fam: TruncatedStableFamily, t: float) -> float:
    """The median scale H_alpha(t) = h_c(t) at c = alpha/4(2 - alpha); the switch is at alpha M^alpha / 8K."""
    return trunc_h(fam, median_c(fam.alpha), t)


def K_alpha(alpha: float) -> float:
    """The median prefactor K(alpha) = 1 + 3 g_c(1/4) with c = alpha/4(2 - alpha).

    With it |mf(X_t) - f(0)| <= K(alpha) H_alpha(t).
    """
    if not 0 < alpha < 2:
        raise ValueError(f"alpha must lie strictly inside (0, 2), got {alpha!r}")
    return 1.0 + 3.0 * g_c(median_c(alpha), 0.25)


def c_alpha(alpha: float) -> float:
    """The constant c_alpha = 1 + max(1, (1 + 2e) alpha / 2(2 - alpha))."""
    if not 0 < alpha < 2:
        raise ValueError(f"alpha must lie strictly inside (0, 2), got {alpha!r}")
    return 1.0 + max(1.0, (1.0 + 2.0 * math.e) * alpha / (2.0 * (2.0 - alpha)))


def truncation_level_c(fam: TruncatedStableFamily, t: float) -> float:
    """The parameter Kt/((2 - alpha) M^alpha) of the bounds taken at R = M."""
    return fam.intensity_K * t / ((2.0 - fam.alpha) * fam.truncation_M**fam.alpha)


def G_t(fam: TruncatedStableFamily, t: float, x: float) -> float:
    """The tail profile at R = M: exp(B(x/M - 1, Kt/((2 - alpha) M^alpha))) for x > M, else 1."""
    M = fam.truncation_M
    if x <= M:
        return 1.0
    return math.exp(bennett_exponent(x / M - 1.0, truncation_level_c(fam, t)))


def trunc_tail_bound(fam: TruncatedStableFamily, t: float, x: float) -> float:
    """Bounds P(f(X_t) - m(t) >= x) by min{Ct/x^alpha, G_t(x)} below M c_alpha and
    min{C't/x^2, G_t(x)} above, with C = 2K c_alpha^alpha / alpha and
    C' = 2K M^(2-alpha) c_alpha^2 / alpha; the result is clamped to 1.
    """
    if not (t > 0 and x > 0):
        raise ValueError(f"t and x must be positive, got t={t!r}, x={x!r}")
    K, M, alpha = fam.intensity_K, fam.truncation_M, fam.alpha
    constant = c_alpha(alpha)
    if x <= M * constant:
        power_bound = 2.0 * K * constant**alpha / alpha * t / x**alpha
    else:
        power_bound = 2.0 * K * M ** (2.0 - alpha) * constant**2 / alpha * t / x**2
    return min(1.0, power_bound, G_t(fam, t, x))


def trunc_threshold(fam: TruncatedStableFamily, q: float, t: float) -> float:
    """The closed-form threshold beyond which P(f(X_t) - m(t) >= x) <= q.

    For t <= q alpha M^alpha / 2K it is min{c_alpha (2Kt/(q alpha))^(1/alpha), [1 + g(q/2)] M},
    afterwards min{c_alpha (2K M^(2-alpha) t/(q alpha))^(1/2), [1 + g(q/2)] M}, where g is
    g_c at c = Kt/((2 - alpha) M^alpha).
    """
    if not 0 < q <= 1:
        raise ValueError(f"q must lie in (0, 1], got {q!r}")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    K, M, alpha = fam.intensity_K, fam.truncation_M, fam.alpha
    if t <= q * alpha * M**alpha / (2.0 * K):
        scale_threshold = c_alpha(alpha) * (2.0 * K * t / (q * alpha)) ** (1.0 / alpha)
    else:
        scale_threshold = c_alpha(alpha) * math.sqrt(2.0 * K * M ** (2.0 - alpha) * t / (q * alpha))
    truncation_threshold = (1.0 + g_c(truncation_level_c(fam, t), q / 2.0)) * M
    return min(scale_threshold, truncation_threshold)
