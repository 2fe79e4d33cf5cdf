"""Stable Levy processes: measure construction, closed forms and the distributional scale."""

from __future__ import annotations

import math

from scipy import integrate

from ..levy_measures import LevyMeasure, ScaleFunctions
from ..radial_parts import PowerLawRadial


class StableFamily:
    """A stable Levy measure with radial part r^(-1-alpha).

    In dimension one the measure is intensity_K / |x|^(1+alpha), or (w_minus, w_plus)
    times r^(-1-alpha) on the two half-lines when weights are given. In dimension
    d > 1 it is uniform on the sphere with total mass spherical_mass, which
    defaults to intensity_K.

    Args:
        alpha (float): the index, strictly inside (0, 2).
        intensity_K (float): the intensity K > 0.
        dimension (int): the dimension d.
        weights (tuple[float, float]): optional asymmetric half-line weights, d = 1 only.
        spherical_mass (float): sigma(S^{d-1}), d > 1 only.
        drift (list[float]): the drift b.
    """

    family = "stable"

    def __init__(
        self,
        alpha: float,
        intensity_K: float = 1.0,
        dimension: int = 1,
        weights: tuple[float, float] | None = None,
        spherical_mass: float | None = None,
        drift=None,
    ) -> None:
        if not 0 < alpha < 2:
            raise ValueError(f"alpha must lie strictly inside (0, 2), got {alpha!r}")
        if not intensity_K > 0:
            raise ValueError(f"the intensity must be positive, got {intensity_K!r}")
        self.alpha = float(alpha)
        self.intensity_K = float(intensity_K)
        self.dimension = int(dimension)
        if self.dimension == 1:
            self.weights = (self.intensity_K, self.intensity_K) if weights is None else tuple(weights)
            self.spherical_mass = None
        else:
            self.weights = None
            self.spherical_mass = self.intensity_K if spherical_mass is None else float(spherical_mass)
        self.drift = drift

        # properties
        self._measure = None
        self._scale_functions = None

    def __repr__(self) -> str:
        return (
            f"StableFamily(alpha={self.alpha!r}, intensity_K={self.intensity_K!r}, "
            f"dimension={self.dimension})"
        )

    @property
    def measure(self) -> LevyMeasure:
        """Fetches the Levy measure"""
        if self._measure is None:
            self._measure = LevyMeasure(
                PowerLawRadial(self.alpha),
                dimension=self.dimension,
                drift=self.drift,
                weights=self.weights,
                spherical_mass=self.spherical_mass,
                label=f"stable(alpha={self.alpha:g}, K={self.intensity_K:g})",
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

    @property
    def mass(self) -> float:
        return self.measure.mass

    def is_pure(self) -> bool:
        """Whether the measure is symmetric, in which case X_t is sampled exactly."""
        return self.measure.is_symmetric()

    def describe(self) -> dict:
        return {
            "family": self.family,
            "alpha": self.alpha,
            "intensity": self.intensity_K,
            "dimension": self.dimension,
        }


def stable_h(fam: StableFamily, c: float, t: float) -> float:
    """Closed form h_c(t) = (sigma(S^{d-1}) t / ((2 - alpha) c))^(1/alpha)."""
    if not (c > 0 and t > 0):
        raise ValueError(f"c and t must be positive, got c={c!r}, t={t!r}")
    return (fam.mass * t / ((2.0 - fam.alpha) * c)) ** (1.0 / fam.alpha)


def stable_A(fam: StableFamily) -> float:
    """The constant A = (2 - alpha)/alpha of nu_bar(R) <= A V(R)/R^2."""
    return (2.0 - fam.alpha) / fam.alpha


def stable_K(fam: StableFamily) -> float:
    """The constant K = (2 - alpha)/(alpha - 1) of M(R) <= K V(R)/R, +inf for alpha <= 1."""
    if fam.alpha <= 1:
        return math.inf
    return (2.0 - fam.alpha) / (fam.alpha - 1.0)


def projection_moment(alpha: float, dimension: int) -> float:
    """Computes E|theta_1|^alpha for theta uniform on the unit sphere of R^d.

    The first coordinate has density proportional to (1 - s^2)^((d-3)/2) on [-1, 1].
    """
    if dimension == 1:
        return 1.0
    beta = 0.5 * (dimension - 3)

    def shoulder(s: float) -> float:
        return (1.0 + s) ** beta

    numerator, _ = integrate.quad(shoulder, 0.0, 1.0, weight="alg", wvar=(alpha, beta))
    denominator, _ = integrate.quad(shoulder, 0.0, 1.0, weight="alg", wvar=(0.0, beta))
    return numerator / denominator


def stable_scale(fam: StableFamily, t: float) -> float:
    """The scale sigma_t with E exp(i<u, X_t>) = exp(-sigma_t^alpha |u|^alpha) for symmetric X.

    The scale is matched on the characteristic exponent of the radial law at u = 1,
    computed by quadrature; in dimension d the projection moment E|theta_1|^alpha enters.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    measure = getattr(fam, "measure", fam)
    alpha = measure.radial.alpha
    cos_integral, _ = measure.radial.fourier_integrals(1.0)
    exponent = t * measure.mass * cos_integral * projection_moment(alpha, measure.dimension)
    return exponent ** (1.0 / alpha)
