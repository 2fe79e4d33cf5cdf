"""Compound Poisson processes: finitely many jumps per unit time, sizes from atoms or a scipy.stats law."""

from __future__ import annotations

from scipy import stats

from ..levy_measures import LevyMeasure, ScaleFunctions
from ..radial_parts import AtomicRadial, DistributionRadial


class CompoundPoissonFamily:
    """A compound Poisson process with jump rate lambda and symmetric jump directions.

    Exactly one of atoms and jump_law is required. In dimension one the jumps are
    positive with probability positive_fraction; in dimension d > 1 directions are uniform.

    Args:
        rate (float): the jump rate lambda > 0, so nu_bar(0+) = lambda.
        atoms (list[tuple[float, float]]): (radius, probability) pairs of the jump sizes.
        jump_law (str): name of a scipy.stats continuous distribution for the jump sizes.
        jump_params (dict): the parameters passed to that distribution.
        dimension (int): the dimension d.
        drift (list[float]): the drift b.
        positive_fraction (float): the probability of an upward jump, d = 1 only.
    """

    family = "compound_poisson"

    def __init__(
        self,
        rate: float,
        atoms=None,
        jump_law: str | None = None,
        jump_params: dict | None = None,
        dimension: int = 1,
        drift=None,
        positive_fraction: float = 0.5,
    ) -> None:
        if not rate > 0:
            raise ValueError(f"the jump rate must be positive, got {rate!r}")
        if (atoms is None) == (jump_law is None):
            raise ValueError("give exactly one of atoms and jump_law")
        if not 0 <= positive_fraction <= 1:
            raise ValueError("positive_fraction must lie in [0, 1]")
        self.rate = float(rate)
        self.dimension = int(dimension)
        self.drift = drift
        self.positive_fraction = float(positive_fraction)
        if atoms is not None:
            radii, probabilities = zip(*atoms)
            self.radial = AtomicRadial(radii, probabilities)
        else:
            try:
                law = getattr(stats, jump_law)
            except AttributeError as error:
                raise ValueError(f"unknown scipy.stats distribution {jump_law!r}") from error
            if not isinstance(law, stats.rv_continuous):
                raise ValueError(f"{jump_law!r} is not a continuous distribution")
            self.radial = DistributionRadial(law(**(jump_params or {})), jump_law, jump_params)

        # properties
        self._measure = None
        self._scale_functions = None

    def __repr__(self) -> str:
        return f"CompoundPoissonFamily(rate={self.rate!r}, jumps={self.radial!r})"

    @property
    def measure(self) -> LevyMeasure:
        """Fetches the Levy measure"""
        if self._measure is None:
            if self.dimension == 1:
                weights = (
                    self.rate * (1.0 - self.positive_fraction),
                    self.rate * self.positive_fraction,
                )
                self._measure = LevyMeasure(
                    self.radial, drift=self.drift, weights=weights, label=f"compound_poisson(rate={self.rate:g})"
                )
            else:
                self._measure = LevyMeasure(
                    self.radial,
                    dimension=self.dimension,
                    drift=self.drift,
                    spherical_mass=self.rate,
                    label=f"compound_poisson(rate={self.rate:g})",
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
            "rate": self.rate,
            "dimension": self.dimension,
            "jumps": self.radial.describe(),
        }
