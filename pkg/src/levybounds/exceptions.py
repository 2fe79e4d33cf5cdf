"""Exceptions raised by levybounds.

Bad arguments (a level outside (0,1], an empty grid, ...) raise the builtin
ValueError/TypeError. The classes below are for the numerical and
probabilistic failure modes: a quadrature that did not converge, an implicit
equation with no solution, a theorem hypothesis that does not hold.
"""

from __future__ import annotations


class LevyBoundsError(Exception):
    """Base class for all levybounds errors."""


class QuadratureError(LevyBoundsError):
    """Raised when an adaptive quadrature does not reach its tolerance.

    Args:
        message (str): diagnostic returned by the integrator.
        partial_estimate (float): the value reached before giving up.
        error_estimate (float): the integrator's own error estimate.
    """

    def __init__(
        self, message: str, partial_estimate: float, error_estimate: float
    ) -> None:
        super().__init__(
            f"{message} (partial estimate {partial_estimate!r}, "
            f"error estimate {error_estimate!r})"
        )
        self.partial_estimate = partial_estimate
        self.error_estimate = error_estimate


class RootFindingError(LevyBoundsError):
    """Base class for failures of the implicit-equation solvers."""


class LevelNeverAttained(RootFindingError):
    """The map never reaches the requested level."""

    def __init__(self, level: float, supremum: float) -> None:
        super().__init__(
            f"level {level!r} is never attained (observed supremum {supremum!r})"
        )
        self.level = level
        self.supremum = supremum


class NonConvergence(RootFindingError):
    """Bisection ran out of iterations."""

    def __init__(self, iterations: int, bracket: tuple[float, float]) -> None:
        super().__init__(
            f"bisection did not converge after {iterations} steps on bracket {bracket!r}"
        )
        self.iterations = iterations
        self.bracket = bracket


class HypothesisError(LevyBoundsError):
    """Base class for violated theorem hypotheses."""


class ConditionViolated(HypothesisError):
    """A hypothesis of a bound does not hold.

    Args:
        condition (str): which condition failed, "median_regime" (t nu_bar(h) < 1/2), "tail_ratio_A"
            (nu_bar(R) <= A V(R)/R^2) or "mean_ratio_K" (M(R) <= K V(R)/R).
        value (float): the offending quantity.
        detail (str): optional human readable context.
    """

    def __init__(self, condition: str, value: float, detail: str = "") -> None:
        message = f"{condition} condition violated: value {value!r}"
        if detail:
            message += f"; {detail}"
        super().__init__(message)
        self.condition = condition
        self.value = value


class InfiniteMean(HypothesisError):
    """The tail first moment M(R), or the constant K of M(R) <= K V(R)/R, is infinite."""


class SamplingError(LevyBoundsError):
    """Raised when a sampler cannot honour its contract."""


class ConfigError(LevyBoundsError, ValueError):
    """Malformed run configuration or measure definition file."""
