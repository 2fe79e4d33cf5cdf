"""This module defines the radial parts of Levy measures.

A Levy measure is stored as a total spherical mass times a radial law rho(r)dr
on (0, +inf). Every radial part integrates against rho with unit spherical
mass; LevyMeasure multiplies by the mass.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from typing import Callable

import numpy as np
from scipy import integrate

from ..exceptions import QuadratureError, SamplingError

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-14
QUAD_LIMIT = 400
# a reported error up to this many tolerances is still accepted
QUAD_ACCEPT = 100.0
# u = log(r) beyond these values under/overflows exp
_LOG_MIN, _LOG_MAX = -740.0, 700.0


def _check_quad(result: tuple, rtol: float, atol: float) -> float:
    value, error = result[0], result[1]
    if len(result) > 3 and error > QUAD_ACCEPT * max(atol, rtol * abs(value)):
        raise QuadratureError(result[3], value, error)
    return value


def log_quad(
    integrand: Callable[[float], float],
    lo: float,
    hi: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> float:
    """Integrates a function of the radius over (lo, hi] after the substitution r = e^u.

    The substitution turns the power-law singularities of Levy densities at the
    origin into exponentially decaying integrands. The u-axis is split at u = 0.

    Args:
        integrand (Callable): the function of r to integrate.
        lo (float): lower radius, 0 allowed.
        hi (float): upper radius, +inf allowed.
        rtol (float): relative tolerance.
        atol (float): absolute tolerance floor.

    Raises:
        QuadratureError: when the integrator does not reach the tolerance.

    Returns:
        float: the integral.
    """
    if hi <= lo:
        return 0.0
    a = -math.inf if lo == 0 else math.log(lo)
    b = math.inf if math.isinf(hi) else math.log(hi)

    def transformed(u: float) -> float:
        if u < _LOG_MIN or u > _LOG_MAX:
            return 0.0
        r = math.exp(u)
        return integrand(r) * r

    pieces = [(a, 0.0), (0.0, b)] if a < 0.0 < b else [(a, b)]
    total = 0.0
    for left, right in pieces:
        result = integrate.quad(
            transformed,
            left,
            right,
            epsabs=atol,
            epsrel=rtol,
            limit=QUAD_LIMIT,
            full_output=1,
        )
        total += _check_quad(result, rtol, atol)
    return total


class RadialPart(ABC):
    """Base class for the radial law rho(r)dr of a Levy measure (unit spherical mass)."""

    @abstractmethod
    def truncated_second_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        """abstract method computing the integral of r^2 rho(r) over (0, R]."""

    @abstractmethod
    def tail_mass(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        """abstract method computing the integral of rho(r) over (R, +inf)."""

    @abstractmethod
    def tail_first_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        """abstract method computing the integral of r rho(r) over (R, +inf), +inf allowed."""

    @abstractmethod
    def shell_first_moment(
        self, a: float, b: float, rtol: float = DEFAULT_RTOL
    ) -> float:
        """abstract method computing the integral of r rho(r) over (a, b]."""

    @abstractmethod
    def inverse_tail_mass(self, level: np.ndarray) -> np.ndarray:
        """abstract method returning radii x with tail_mass(x) = level (generalised inverse)."""

    @abstractmethod
    def describe(self) -> dict:
        """abstract method returning a serialisable description of the radial law."""

    def activity(self) -> float:
        """Total mass rho((0, +inf)); +inf for infinite activity."""
        return math.inf

    @property
    def characteristic_scale(self) -> float:
        """A radius around which the interesting behaviour of the law happens."""
        return 1.0

    @property
    def support_radius(self) -> float:
        """Upper end of the support of rho."""
        return math.inf

    def limit_ratios(self) -> tuple[float, float] | None:
        """Closed-form suprema over all R > 0 of R^2 nu_bar(R)/V(R) and R M(R)/V(R).

        Returns None when no closed form is known.
        """
        return None

    def fourier_integrals(self, u: float, rtol: float = DEFAULT_RTOL) -> tuple[float, float]:
        """Integrals entering the characteristic exponent of a one-dimensional measure.

        Args:
            u (float): a positive frequency.
            rtol (float): relative tolerance.

        Returns:
            tuple[float, float]: the integrals of (1 - cos ur) rho(r) and of
            (sin ur - ur 1{r <= 1}) rho(r) over (0, +inf).
        """
        density = getattr(self, "density")
        upper = self.support_radius
        inner = min(1.0, upper)
        cos_part = log_quad(lambda r: 2.0 * math.sin(0.5 * u * r) ** 2 * density(r), 0.0, inner, rtol)
        sin_part = log_quad(lambda r: (math.sin(u * r) - u * r) * density(r), 0.0, inner, rtol)
        if upper <= 1.0:
            return cos_part, sin_part
        if math.isinf(upper):
            # QAWF handles the oscillating tail on (1, +inf)
            cos_tail = integrate.quad(
                density, 1.0, math.inf, weight="cos", wvar=u, epsabs=DEFAULT_ATOL, full_output=1
            )
            sin_tail = integrate.quad(
                density, 1.0, math.inf, weight="sin", wvar=u, epsabs=DEFAULT_ATOL, full_output=1
            )
            cos_part += self.tail_mass(1.0, rtol) - _check_quad(cos_tail, rtol, DEFAULT_ATOL)
            sin_part += _check_quad(sin_tail, rtol, DEFAULT_ATOL)
            return cos_part, sin_part
        for weight, sign in (("cos", -1.0), ("sin", 1.0)):
            result = integrate.quad(
                density,
                1.0,
                upper,
                weight=weight,
                wvar=u,
                epsabs=DEFAULT_ATOL,
                epsrel=rtol,
                limit=QUAD_LIMIT,
                full_output=1,
            )
            value = _check_quad(result, rtol, DEFAULT_ATOL)
            if sign < 0:
                cos_part += self.tail_mass(1.0, rtol) - value
            else:
                sin_part += value
        return cos_part, sin_part

    def sample_shell(self, lo: float, hi: float, u: np.ndarray) -> np.ndarray:
        """Maps uniforms in (0, 1] to radii distributed like rho restricted to (lo, hi].

        Args:
            lo (float): lower radius (0 allowed for finite activity).
            hi (float): upper radius (+inf allowed).
            u (np.ndarray): uniforms in (0, 1].

        Returns:
            np.ndarray: radii in (lo, hi).
        """
        top = 0.0 if math.isinf(hi) else self.tail_mass(hi)
        bottom = self.activity() if lo == 0 else self.tail_mass(lo)
        if not math.isfinite(bottom):
            raise SamplingError(
                "cannot sample a shell reaching the origin of an infinite-activity law"
            )
        return self.inverse_tail_mass(top + u * (bottom - top))


class PowerLawRadial(RadialPart):
    """Radial law rho(r) = r^(-1-alpha) on (0, M], M = +inf for the pure stable case.

    Args:
        alpha (float): index in (0, 2).
        truncation (float): the truncation radius M > 0.
    """

    def __init__(self, alpha: float, truncation: float = math.inf) -> None:
        if not 0 < alpha < 2:
            raise ValueError(f"alpha must lie strictly inside (0, 2), got {alpha!r}")
        if not truncation > 0:
            raise ValueError(f"the truncation radius must be positive, got {truncation!r}")
        self.alpha = float(alpha)
        self.truncation = float(truncation)

    def __repr__(self) -> str:
        return f"PowerLawRadial(alpha={self.alpha!r}, truncation={self.truncation!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerLawRadial):
            return NotImplemented
        return (self.alpha, self.truncation) == (other.alpha, other.truncation)

    def __hash__(self) -> int:
        return hash(("power_law", self.alpha, self.truncation))

    def density(self, r: float) -> float:
        if r <= 0 or r > self.truncation:
            return 0.0
        return r ** (-1.0 - self.alpha)

    @property
    def _inverse_truncation_power(self) -> float:
        return 0.0 if math.isinf(self.truncation) else self.truncation**-self.alpha

    def truncated_second_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return min(R, self.truncation) ** (2.0 - self.alpha) / (2.0 - self.alpha)

    def tail_mass(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        if R >= self.truncation:
            return 0.0
        return (R**-self.alpha - self._inverse_truncation_power) / self.alpha

    def tail_first_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return self.shell_first_moment(R, math.inf)

    def shell_first_moment(
        self, a: float, b: float, rtol: float = DEFAULT_RTOL
    ) -> float:
        b = min(b, self.truncation)
        if a >= b:
            return 0.0
        if math.isinf(b):
            if self.alpha <= 1:
                return math.inf
            return a ** (1.0 - self.alpha) / (self.alpha - 1.0)
        if self.alpha == 1:
            return math.log(b / a)
        return (a ** (1.0 - self.alpha) - b ** (1.0 - self.alpha)) / (self.alpha - 1.0)

    def inverse_tail_mass(self, level: np.ndarray) -> np.ndarray:
        level = np.asarray(level, dtype=float)
        return (self.alpha * level + self._inverse_truncation_power) ** (-1.0 / self.alpha)

    @property
    def characteristic_scale(self) -> float:
        return 1.0 if math.isinf(self.truncation) else self.truncation

    @property
    def support_radius(self) -> float:
        return self.truncation

    def limit_ratios(self) -> tuple[float, float]:
        # both suprema are approached as R -> 0, where truncation is invisible
        a_sup = (2.0 - self.alpha) / self.alpha
        if self.alpha <= 1:
            return a_sup, math.inf
        return a_sup, (2.0 - self.alpha) / (self.alpha - 1.0)

    def describe(self) -> dict:
        return {
            "kind": "power_law",
            "alpha": self.alpha,
            "truncation": self.truncation,
        }


class AtomicRadial(RadialPart):
    """A finite radial law made of atoms, normalised to total mass one.

    Args:
        radii (list[float]): positive atom radii.
        probabilities (list[float]): nonnegative weights, rescaled to sum to one.
    """

    def __init__(self, radii, probabilities=None) -> None:
        radii = np.asarray(radii, dtype=float)
        if radii.ndim != 1 or radii.size == 0:
            raise ValueError("at least one atom radius is required")
        if np.any(radii <= 0) or not np.all(np.isfinite(radii)):
            raise ValueError("atom radii must be positive and finite")
        if probabilities is None:
            probabilities = np.ones_like(radii)
        probabilities = np.asarray(probabilities, dtype=float)
        if probabilities.shape != radii.shape or np.any(probabilities < 0):
            raise ValueError("one nonnegative probability per atom is required")
        if probabilities.sum() <= 0:
            raise ValueError("atom probabilities must not all vanish")
        order = np.argsort(radii)
        self.radii = radii[order]
        self.probabilities = probabilities[order] / probabilities.sum()
        # tail mass just after each atom, decreasing, last entry 0
        self._tails = np.concatenate(
            [np.cumsum(self.probabilities[::-1])[::-1][1:], [0.0]]
        )

    def __repr__(self) -> str:
        return f"AtomicRadial(radii={self.radii.tolist()!r}, probabilities={self.probabilities.tolist()!r})"

    def truncated_second_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        inside = self.radii <= R
        return float(np.sum(self.probabilities[inside] * self.radii[inside] ** 2))

    def tail_mass(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return float(np.sum(self.probabilities[self.radii > R]))

    def tail_first_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        outside = self.radii > R
        return float(np.sum(self.probabilities[outside] * self.radii[outside]))

    def shell_first_moment(
        self, a: float, b: float, rtol: float = DEFAULT_RTOL
    ) -> float:
        inside = (self.radii > a) & (self.radii <= b)
        return float(np.sum(self.probabilities[inside] * self.radii[inside]))

    def fourier_integrals(self, u: float, rtol: float = DEFAULT_RTOL) -> tuple[float, float]:
        phase = u * self.radii
        cos_part = np.sum(self.probabilities * (1.0 - np.cos(phase)))
        sin_part = np.sum(self.probabilities * (np.sin(phase) - phase * (self.radii <= 1.0)))
        return float(cos_part), float(sin_part)

    def inverse_tail_mass(self, level: np.ndarray) -> np.ndarray:
        level = np.asarray(level, dtype=float)
        # the atom index is the number of atoms whose tail is still >= level
        index = np.searchsorted(-self._tails, -level, side="right")
        return self.radii[np.clip(index, 0, self.radii.size - 1)]

    def activity(self) -> float:
        return 1.0

    @property
    def characteristic_scale(self) -> float:
        return float(np.sum(self.probabilities * self.radii))

    def limit_ratios(self) -> tuple[float, float]:
        # V vanishes below the smallest atom while the tail mass does not
        return math.inf, math.inf

    def describe(self) -> dict:
        return {
            "kind": "atoms",
            "atoms": [[float(r), float(p)] for r, p in zip(self.radii, self.probabilities)],
        }


class DistributionRadial(RadialPart):
    """A finite radial law given by a frozen scipy.stats continuous distribution on (0, +inf).

    Args:
        law: a frozen scipy.stats distribution (e.g. scipy.stats.expon(scale=2.0)).
        name (str): the scipy.stats name, kept for serialisation.
        params (dict): the parameters used to freeze the law.
    """

    def __init__(self, law, name: str = "", params: dict | None = None) -> None:
        lower, _ = law.support()
        if lower < 0:
            raise ValueError("the jump-size law must be supported on the positive half-line")
        self.law = law
        self.name = name
        self.params = dict(params or {})

    def __repr__(self) -> str:
        return f"DistributionRadial({self.name or self.law.dist.name}, {self.params!r})"

    def density(self, r: float) -> float:
        return float(self.law.pdf(r))

    def truncated_second_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return float(self.law.expect(lambda r: r * r, lb=0.0, ub=R, epsrel=rtol))

    def tail_mass(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return float(self.law.sf(R))

    def tail_first_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        if not math.isfinite(self.law.mean()):
            return math.inf
        return float(self.law.expect(lambda r: r, lb=R, ub=math.inf, epsrel=rtol))

    def shell_first_moment(
        self, a: float, b: float, rtol: float = DEFAULT_RTOL
    ) -> float:
        if a >= b:
            return 0.0
        if math.isinf(b):
            return self.tail_first_moment(a, rtol)
        return float(self.law.expect(lambda r: r, lb=a, ub=b, epsrel=rtol))

    def inverse_tail_mass(self, level: np.ndarray) -> np.ndarray:
        return np.asarray(self.law.isf(level), dtype=float)

    def activity(self) -> float:
        return 1.0

    @property
    def characteristic_scale(self) -> float:
        return float(self.law.median())

    @property
    def support_radius(self) -> float:
        return float(self.law.support()[1])

    def limit_ratios(self) -> tuple[float, float]:
        # finite activity: R^2 nu_bar(R) / V(R) blows up as R -> 0
        return math.inf, math.inf

    def describe(self) -> dict:
        return {"kind": "jump_law", "name": self.name, "params": self.params}


class NumericRadialDensity(RadialPart):
    """A radial density given as a callable, integrated by adaptive quadrature.

    Args:
        density (Callable[[float], float]): rho(r) > 0 on (0, r_max).
        r_max (float): upper end of the support, +inf allowed.
        rtol (float): default relative tolerance of the quadratures.
        description (str): free text used when the measure is described.
    """

    # radii of the tail-extrapolation windows, in multiples of R
    _WINDOWS = (1e4, 1e8, 1e12)
    # a window-to-window ratio above this is treated as a divergent first moment
    _DIVERGENCE_RATIO = 0.999
    _TABLE_POINTS = 2049
    _TABLE_DECADES = 12

    def __init__(
        self,
        density: Callable[[float], float],
        r_max: float = math.inf,
        rtol: float = DEFAULT_RTOL,
        description: str = "",
    ) -> None:
        if not r_max > 0:
            raise ValueError(f"r_max must be positive, got {r_max!r}")
        self.density = density
        self.r_max = float(r_max)
        self.rtol = rtol
        self.description = description

        # properties
        self._inverse_table = None

    def __repr__(self) -> str:
        return f"NumericRadialDensity({self.description or self.density!r}, r_max={self.r_max!r})"

    def truncated_second_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return log_quad(lambda r: r * r * self.density(r), 0.0, min(R, self.r_max), rtol)

    def tail_mass(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return log_quad(self.density, R, self.r_max, rtol)

    def tail_first_moment(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        if R >= self.r_max:
            return 0.0
        if math.isfinite(self.r_max):
            return self.shell_first_moment(R, self.r_max, rtol)
        partials = [
            self.shell_first_moment(R, R * window, rtol) for window in self._WINDOWS
        ]
        first, second = partials[1] - partials[0], partials[2] - partials[1]
        if first <= 0:
            return partials[2]
        ratio = second / first
        if ratio >= self._DIVERGENCE_RATIO:
            logger.warning(
                "tail first moment beyond R=%g looks divergent (window ratio %.4f)",
                R,
                ratio,
            )
            return math.inf
        # windows of equal log-width: a power-law tail contributes a geometric series
        logger.debug("tail first moment extrapolated with window ratio %.4g", ratio)
        return partials[2] + second * ratio / (1.0 - ratio)

    def shell_first_moment(
        self, a: float, b: float, rtol: float = DEFAULT_RTOL
    ) -> float:
        return log_quad(lambda r: r * self.density(r), a, min(b, self.r_max), rtol)

    @property
    def characteristic_scale(self) -> float:
        return self.r_max if math.isfinite(self.r_max) else 1.0

    @property
    def support_radius(self) -> float:
        return self.r_max

    def get_inverse_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Tabulates (log tail mass, log radius) on a log grid for inverse-CDF sampling.

        Returns:
            tuple[np.ndarray, np.ndarray]: increasing log tail masses and matching log radii.
        """
        scale = self.characteristic_scale
        hi = min(self.r_max, scale * 10.0**self._TABLE_DECADES)
        radii = np.geomspace(scale * 10.0**-self._TABLE_DECADES, hi, self._TABLE_POINTS)
        tails = np.array([self.tail_mass(r, self.rtol) for r in radii])
        keep = tails > 0
        return np.log(tails[keep])[::-1], np.log(radii[keep])[::-1]

    @property
    def inverse_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Fetches the inverse-CDF table"""
        if self._inverse_table is None:
            self._inverse_table = self.get_inverse_table()
            return self._inverse_table
        return self._inverse_table

    def inverse_tail_mass(self, level: np.ndarray) -> np.ndarray:
        log_tails, log_radii = self.inverse_table
        level = np.asarray(level, dtype=float)
        if np.any(level > math.exp(log_tails[-1]) * (1.0 + 1e-12)):
            raise SamplingError(
                "inverse-CDF bracketing failure: requested tail mass exceeds the "
                f"tabulated range (max {math.exp(log_tails[-1])!r})"
            )
        log_level = np.log(level)
        radii = np.exp(np.interp(log_level, log_tails, log_radii))
        below = log_level < log_tails[0]
        if np.any(below):
            if math.isfinite(self.r_max):
                # tail mass falls linearly to zero on the last cell before r_max
                x_last, t_last = math.exp(log_radii[0]), math.exp(log_tails[0])
                radii[below] = self.r_max - (self.r_max - x_last) * level[below] / t_last
            else:
                slope = (log_radii[1] - log_radii[0]) / (log_tails[1] - log_tails[0])
                radii[below] = np.exp(log_radii[0] + slope * (log_level[below] - log_tails[0]))
        return radii

    def describe(self) -> dict:
        return {
            "kind": "numeric_density",
            "description": self.description,
            "r_max": self.r_max,
        }
