"""
This module defines the LevyMeasure, LogGrid and ScaleFunctions classes, together with the
radial functionals V, M_tail, nu_bar and the structural constants A and K.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import InfiniteMean
from .radial_parts import DEFAULT_RTOL, RadialPart

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 400
DEFAULT_GRID_DECADES = 8
# slack allowed when certifying nu_bar <= A V / R^2 and M <= K V / R
CERTIFICATE_SLACK = 1e-12
CERTIFICATE_RTOL = 1e-9


class LevyMeasure:
    """A Levy measure together with the drift b of the characteristic exponent.

    In dimension one the measure is w_minus rho(r)dr on the negative half-line plus
    w_plus rho(r)dr on the positive one. In dimension d > 1 it is spherically
    symmetric: a uniform spherical measure of total mass sigma(S^{d-1}) times rho(r)dr.

    Args:
        radial (RadialPart): the radial law rho.
        dimension (int): the dimension d of the state space.
        drift (list[float]): the drift vector b, of length d.
        weights (tuple[float, float]): (w_minus, w_plus), only for d = 1.
        spherical_mass (float): sigma(S^{d-1}), only for d > 1.
        label (str): a short name used in reports.
    """

    def __init__(
        self,
        radial: RadialPart,
        dimension: int = 1,
        drift=None,
        weights: tuple[float, float] | None = None,
        spherical_mass: float | None = None,
        label: str = "",
    ) -> None:
        if not isinstance(radial, RadialPart):
            raise TypeError("the radial part must be a RadialPart")
        if int(dimension) != dimension or dimension < 1:
            raise ValueError(f"the dimension must be a positive integer, got {dimension!r}")
        self.radial = radial
        self.dimension = int(dimension)
        self.drift = np.zeros(self.dimension) if drift is None else np.asarray(drift, dtype=float).reshape(-1)
        if self.drift.shape != (self.dimension,):
            raise ValueError(
                f"the drift has length {self.drift.size} but the dimension is {self.dimension}"
            )
        if self.dimension == 1:
            if spherical_mass is not None:
                raise ValueError("use weights=(w_minus, w_plus) in dimension one")
            w_minus, w_plus = (1.0, 1.0) if weights is None else weights
            if w_minus < 0 or w_plus < 0 or w_minus + w_plus <= 0:
                raise ValueError("half-line weights must be nonnegative and not both zero")
            self.weights = (float(w_minus), float(w_plus))
            self.mass = self.weights[0] + self.weights[1]
        else:
            if weights is not None:
                raise ValueError("half-line weights only make sense in dimension one")
            if spherical_mass is None or not spherical_mass > 0:
                raise ValueError("a positive spherical mass is required in dimension d > 1")
            self.weights = None
            self.mass = float(spherical_mass)
        self.label = label

    def __repr__(self) -> str:
        return (
            f"LevyMeasure({self.label or self.radial!r}, dimension={self.dimension}, "
            f"mass={self.mass!r}, drift={self.drift.tolist()!r})"
        )

    @property
    def characteristic_scale(self) -> float:
        return self.radial.characteristic_scale

    def is_symmetric(self) -> bool:
        """Whether nu is invariant under y -> -y."""
        return self.dimension > 1 or self.weights[0] == self.weights[1]

    def is_process_symmetric(self) -> bool:
        """Whether X_t has the same law as -X_t."""
        return self.is_symmetric() and not np.any(self.drift)

    def is_finite_activity(self) -> bool:
        return math.isfinite(self.radial.activity())

    def V(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return self.mass * self.radial.truncated_second_moment(R, rtol)

    def nu_bar(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        return self.mass * self.radial.tail_mass(R, rtol)

    def M_tail(self, R: float, rtol: float = DEFAULT_RTOL) -> float:
        moment = self.radial.tail_first_moment(R, rtol)
        return math.inf if math.isinf(moment) else self.mass * moment

    def shell_mean(self, a: float, b: float, rtol: float = DEFAULT_RTOL) -> np.ndarray:
        """Computes the vector integral of y over the shell {a < |y| <= b}.

        Odd integrands vanish on symmetric shells, so only asymmetric one-dimensional
        measures need a quadrature.
        """
        if a >= b or self.is_symmetric():
            return np.zeros(self.dimension)
        w_minus, w_plus = self.weights
        moment = self.radial.shell_first_moment(a, b, rtol)
        return np.array([(w_plus - w_minus) * moment])

    def truncated_mean(self, R: float, rtol: float = DEFAULT_RTOL) -> np.ndarray:
        """Computes E Y^(R)_1, the mean of the process with jumps larger than R removed.

        This is b - int_{R < |y| <= 1} y nu(dy) when R < 1 and
        b + int_{1 < |y| <= R} y nu(dy) when R > 1; at most one shell is nonempty.
        """
        if R < 1:
            return self.drift - self.shell_mean(R, 1.0, rtol)
        return self.drift + self.shell_mean(1.0, R, rtol)

    def process_mean(self, rtol: float = DEFAULT_RTOL) -> np.ndarray:
        """Computes E X_1 = b + int_{|y| > 1} y nu(dy).

        Raises:
            InfiniteMean: when the tail first moment M(1) is infinite.
        """
        if math.isinf(self.M_tail(1.0, rtol)):
            raise InfiniteMean(f"{self!r} has an infinite tail first moment")
        return self.drift + self.shell_mean(1.0, math.inf, rtol)

    def is_centered(self, rtol: float = DEFAULT_RTOL) -> bool:
        try:
            mean = self.process_mean(rtol)
        except InfiniteMean:
            return False
        return bool(np.allclose(mean, 0.0, atol=1e-12))

    def characteristic_exponent(self, u: float, rtol: float = DEFAULT_RTOL) -> complex:
        """Evaluates psi(u) with E exp(iuX_t) = exp(t psi(u)), for one-dimensional measures.

        Args:
            u (float): the frequency.
            rtol (float): relative tolerance of the quadratures.

        Returns:
            complex: psi(u) = iub + int (e^{iuy} - 1 - iuy 1{|y| <= 1}) nu(dy).
        """
        if self.dimension != 1:
            raise ValueError("the characteristic exponent is only available in dimension one")
        if u == 0:
            return 0j
        cos_part, sin_part = self.radial.fourier_integrals(abs(u), rtol)
        sin_part = math.copysign(sin_part, u) if sin_part else 0.0
        w_minus, w_plus = self.weights
        real = -(w_minus + w_plus) * cos_part
        imag = u * self.drift[0] + (w_plus - w_minus) * sin_part
        return complex(real, imag)

    def validate(self, rtol: float = DEFAULT_RTOL) -> None:
        """Checks the integrability conditions of a Levy measure.

        Raises:
            ValueError: when V(1) or nu_bar(1) is not finite, or V does not vanish at 0.
        """
        if not math.isfinite(self.V(1.0, rtol)):
            raise ValueError("V(1) is not finite: the measure does not integrate |y|^2 near 0")
        if not math.isfinite(self.nu_bar(1.0, rtol)):
            raise ValueError("nu_bar(1) is not finite")
        scale = self.characteristic_scale
        values = [self.V(scale * 10.0 ** (-2 * k), rtol) for k in range(1, 6)]
        if any(later > earlier for earlier, later in zip(values, values[1:])):
            raise ValueError("V is not nondecreasing near the origin")
        if values[0] > 0 and values[-1] >= values[0]:
            raise ValueError("V(R) does not decrease to 0 as R -> 0: the measure has an atom at the origin")

    def describe(self) -> dict:
        description = {
            "label": self.label,
            "dimension": self.dimension,
            "drift": self.drift.tolist(),
            "radial": self.radial.describe(),
        }
        if self.dimension == 1:
            description["weights"] = list(self.weights)
        else:
            description["spherical_mass"] = self.mass
        return description


@dataclass(frozen=True)
class LogGrid:
    """A log-spaced grid of radii [lo, hi] with the given number of points."""

    lo: float
    hi: float
    points: int = DEFAULT_GRID_POINTS

    def __post_init__(self) -> None:
        if not (0 < self.lo < self.hi) or not math.isfinite(self.hi):
            raise ValueError(f"invalid grid bounds [{self.lo!r}, {self.hi!r}]")
        if self.points < 2:
            raise ValueError("a grid needs at least two points")

    @classmethod
    def around(
        cls,
        scale: float,
        decades: int = DEFAULT_GRID_DECADES,
        points: int = DEFAULT_GRID_POINTS,
    ) -> LogGrid:
        return cls(scale * 10.0**-decades, scale * 10.0**decades, points)

    def radii(self) -> np.ndarray:
        return np.geomspace(self.lo, self.hi, self.points)


def _sup_ratio(numerators: np.ndarray, denominators: np.ndarray) -> float:
    if np.any(np.isinf(numerators)):
        return math.inf
    if np.any((denominators == 0) & (numerators > 0)):
        return math.inf
    positive = denominators > 0
    if not np.any(positive):
        return 0.0
    return float(np.max(numerators[positive] / denominators[positive]))


class ScaleFunctions:
    """Tabulated evaluators for V, M and nu_bar of a fixed LevyMeasure.

    The tables are filled on construction and never written to afterwards, so an
    instance can be shared between threads. Radii on the grid are read from the
    tables; any other radius is integrated afresh.

    Args:
        measure (LevyMeasure): the measure.
        grid (LogGrid): the tabulation grid, by default 400 points over [1e-8, 1e8] * scale.
        rtol (float): relative tolerance of the quadratures.
    """

    def __init__(
        self,
        measure: LevyMeasure,
        grid: LogGrid | None = None,
        rtol: float = DEFAULT_RTOL,
    ) -> None:
        measure.validate(rtol)
        self.measure = measure
        self.rtol = rtol
        self.grid = LogGrid.around(measure.characteristic_scale) if grid is None else grid
        self.radii = self.grid.radii()
        self.V_table, self.nu_bar_table, self.M_table = self._tabulate(self.radii)
        for table in (self.radii, self.V_table, self.nu_bar_table, self.M_table):
            table.setflags(write=False)
        logger.debug("tabulated %d radii for %r", self.radii.size, measure)

    def __repr__(self) -> str:
        return f"ScaleFunctions({self.measure!r}, grid={self.grid!r})"

    def _tabulate(self, radii: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        V_values = np.array([self.measure.V(R, self.rtol) for R in radii])
        nu_bar_values = np.array([self.measure.nu_bar(R, self.rtol) for R in radii])
        M_values = np.array([self.measure.M_tail(R, self.rtol) for R in radii])
        return V_values, nu_bar_values, M_values

    @staticmethod
    def _check_radius(R: float) -> None:
        if not R > 0:
            raise ValueError(f"the radius must be positive, got {R!r}")

    def _grid_index(self, R: float) -> int | None:
        index = int(np.searchsorted(self.radii, R))
        if index < self.radii.size and self.radii[index] == R:
            return index
        return None

    def V(self, R: float) -> float:
        self._check_radius(R)
        index = self._grid_index(R)
        if index is not None:
            return float(self.V_table[index])
        return self.measure.V(R, self.rtol)

    def nu_bar(self, R: float) -> float:
        self._check_radius(R)
        index = self._grid_index(R)
        if index is not None:
            return float(self.nu_bar_table[index])
        return self.measure.nu_bar(R, self.rtol)

    def M_tail(self, R: float) -> float:
        self._check_radius(R)
        index = self._grid_index(R)
        if index is not None:
            return float(self.M_table[index])
        return self.measure.M_tail(R, self.rtol)

    def _tables_for(self, grid: LogGrid | None) -> tuple[np.ndarray, ...]:
        if grid is None or grid == self.grid:
            return self.radii, self.V_table, self.nu_bar_table, self.M_table
        radii = grid.radii()
        return (radii, *self._tabulate(radii))

    def A_constant(self, grid: LogGrid | None = None) -> float:
        """The smallest A with nu_bar(R) <= A V(R)/R^2 on the grid, joined with the closed-form limit.

        Args:
            grid (LogGrid): the certification grid, the tabulation grid by default.

        Returns:
            float: A, +inf when V vanishes where nu_bar does not.
        """
        radii, V_values, nu_bar_values, _ = self._tables_for(grid)
        supremum = _sup_ratio(radii**2 * nu_bar_values, V_values)
        limits = self.measure.radial.limit_ratios()
        if limits is not None:
            supremum = max(supremum, limits[0])
        return supremum

    def K_constant(self, grid: LogGrid | None = None) -> float:
        """The smallest K with M(R) <= K V(R)/R on the grid, joined with the closed-form limit.

        Args:
            grid (LogGrid): the certification grid, the tabulation grid by default.

        Returns:
            float: K, +inf when M is infinite.
        """
        radii, V_values, _, M_values = self._tables_for(grid)
        supremum = _sup_ratio(radii * M_values, V_values)
        limits = self.measure.radial.limit_ratios()
        if limits is not None:
            supremum = max(supremum, limits[1])
        return supremum

    def certifies_A(self, A: float, R: float) -> bool:
        """Whether nu_bar(R) <= A V(R)/R^2 holds at R up to the certificate slack."""
        return self.nu_bar(R) <= A * self.V(R) / R**2 * (1.0 + CERTIFICATE_RTOL) + CERTIFICATE_SLACK

    def certifies_K(self, K: float, R: float) -> bool:
        """Whether M(R) <= K V(R)/R holds at R up to the certificate slack."""
        return self.M_tail(R) <= K * self.V(R) / R * (1.0 + CERTIFICATE_RTOL) + CERTIFICATE_SLACK


def V(sf: ScaleFunctions, R: float) -> float:
    """Computes the truncated second moment V(R), the integral of |y|^2 over {|y| <= R}."""
    return sf.V(R)


def M_tail(sf: ScaleFunctions, R: float) -> float:
    """Computes the tail first moment M(R), the integral of |y| over {|y| > R}; may be +inf."""
    return sf.M_tail(R)


def nu_bar(sf: ScaleFunctions, R: float) -> float:
    """Computes the tail mass nu({|y| > R})."""
    return sf.nu_bar(R)


def A_constant(sf: ScaleFunctions, grid: LogGrid | None = None) -> float:
    return sf.A_constant(grid)


def K_constant(sf: ScaleFunctions, grid: LogGrid | None = None) -> float:
    return sf.K_constant(grid)
