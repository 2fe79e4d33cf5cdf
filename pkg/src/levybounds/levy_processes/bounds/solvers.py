"""
This module solves the implicit equations behind the bounds: the scale function h_c(t),
the Bennett-type inverse g_c(x) and the Marcus-Rosinski radius x0(t).
"""

from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np
from scipy import optimize

from ...exceptions import InfiniteMean, LevelNeverAttained, NonConvergence
from ..levy_measures import ScaleFunctions

logger = logging.getLogger(__name__)

ROOT_RTOL = 1e-12
MAX_BISECTION_STEPS = 200
# a bracketed sign change is a genuine crossing only if the residual is this small (relative)
RESIDUAL_RTOL = 1e-9
# decades added per grid expansion, and how many expansions are tried on each side
EXPANSION_DECADES = 4
MAX_EXPANSIONS = 10
EXPANSION_POINTS = 100


def bennett_exponent(u, c: float):
    """Computes u - (u + c) log(1 + u/c), the exponent shared by all the tail bounds.

    Args:
        u (float | np.ndarray): a nonnegative deviation.
        c (float): a positive parameter.

    Returns:
        float | np.ndarray: the exponent, 0 at u = 0 and strictly decreasing in u.
    """
    return u - (u + c) * np.log1p(u / c)


def _bisect(func: Callable[[float], float], lo: float, hi: float) -> float:
    try:
        root, result = optimize.bisect(
            func,
            lo,
            hi,
            xtol=1e-300,
            rtol=ROOT_RTOL,
            maxiter=MAX_BISECTION_STEPS,
            full_output=True,
        )
    except RuntimeError as error:
        raise NonConvergence(MAX_BISECTION_STEPS, (lo, hi)) from error
    logger.debug("bisection on [%g, %g] converged in %d steps", lo, hi, result.iterations)
    return root


def leftmost_level_crossing(
    func: Callable[[float], float],
    level: float,
    radii: np.ndarray,
    values: np.ndarray | None = None,
) -> float:
    """Finds the smallest x on (0, +inf) with func(x) = level.

    The grid is scanned left to right and extended by whole decades when the
    crossing lies outside it. Each bracketed sign change is bisected; brackets
    around a jump of func (e.g. at an atom) leave a large residual and are skipped.

    Args:
        func (Callable): the map x -> func(x), continuous up to jumps.
        level (float): the positive target level.
        radii (np.ndarray): increasing starting grid.
        values (np.ndarray): func evaluated on radii, if already known.

    Raises:
        LevelNeverAttained: if no crossing is found.
        NonConvergence: if a bisection runs out of steps.

    Returns:
        float: the leftmost solution.
    """
    radii = np.asarray(radii, dtype=float)
    values = np.array([func(x) for x in radii]) if values is None else np.asarray(values, dtype=float)

    for _ in range(MAX_EXPANSIONS):
        if not 0 < values[0] < level:
            break
        lower = radii[0] * np.geomspace(10.0**-EXPANSION_DECADES, 1.0, EXPANSION_POINTS, endpoint=False)
        radii = np.concatenate([lower, radii])
        values = np.concatenate([[func(x) for x in lower], values])
        logger.debug("expanded the search grid down to %g", radii[0])
    for _ in range(MAX_EXPANSIONS):
        if not values[-1] > level:
            break
        upper = radii[-1] * np.geomspace(1.0, 10.0**EXPANSION_DECADES, EXPANSION_POINTS + 1)[1:]
        radii = np.concatenate([radii, upper])
        values = np.concatenate([values, [func(x) for x in upper]])
        logger.debug("expanded the search grid up to %g", radii[-1])

    differences = values - level
    for i in range(radii.size):
        if differences[i] == 0:
            return float(radii[i])
        if i + 1 == radii.size or differences[i] * differences[i + 1] > 0:
            continue
        root = _bisect(lambda x: func(x) - level, radii[i], radii[i + 1])
        if abs(func(root) - level) <= RESIDUAL_RTOL * level:
            return root
        logger.debug("skipping a jump of the level map near %g", root)
    raise LevelNeverAttained(level, float(np.max(values)))


def h_c(sf: ScaleFunctions, c: float, t: float) -> float:
    """Computes the scale function h_c(t) = inf{x > 0 : V(x)/x^2 = c/t}.

    Args:
        sf (ScaleFunctions): the scale functions of the measure.
        c (float): a positive parameter.
        t (float): a positive time.

    Raises:
        LevelNeverAttained: when sup V(x)/x^2 < c/t (e.g. compound Poisson with large c/t).

    Returns:
        float: h_c(t).
    """
    if not (c > 0 and t > 0):
        raise ValueError(f"c and t must be positive, got c={c!r}, t={t!r}")
    if not np.any(sf.V_table > 0):
        raise ValueError("V vanishes identically on the grid")
    return leftmost_level_crossing(
        lambda x: sf.V(x) / x**2, c / t, sf.radii, sf.V_table / sf.radii**2
    )


def x0_MR(sf: ScaleFunctions, t: float) -> float:
    """Computes x0(t), the solution of V(x)/x^2 + M(x)/x = 1/t.

    Raises:
        InfiniteMean: when M is infinite.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")
    if np.any(np.isinf(sf.M_table)):
        raise InfiniteMean("x0 requires a finite tail first moment M")
    return leftmost_level_crossing(
        lambda x: sf.V(x) / x**2 + sf.M_tail(x) / x,
        1.0 / t,
        sf.radii,
        sf.V_table / sf.radii**2 + sf.M_table / sf.radii,
    )


def g_c(c: float, x: float) -> float:
    """Solves y - (y + c) log(1 + y/c) = log(x) for y >= 0.

    The left side decreases strictly from 0 to -inf, so the solution is unique.

    Args:
        c (float): a positive parameter.
        x (float): a level in (0, 1].

    Returns:
        float: g_c(x), with g_c(1) = 0.
    """
    if not c > 0:
        raise ValueError(f"c must be positive, got {c!r}")
    if not 0 < x <= 1:
        raise ValueError(f"x must lie in (0, 1], got {x!r}")
    if x == 1:
        return 0.0
    target = math.log(x)

    def residual(y: float) -> float:
        return y - (y + c) * math.log1p(y / c) - target

    upper = 1.0
    while residual(upper) > 0:
        upper *= 2.0
        if math.isinf(upper):
            raise NonConvergence(0, (0.0, upper))
    y = optimize.bisect(residual, 0.0, upper, xtol=1e-13, maxiter=MAX_BISECTION_STEPS)
    # one Newton step, the derivative of the left side being -log(1 + y/c)
    slope = -math.log1p(y / c)
    if slope != 0:
        polished = y - residual(y) / slope
        if polished >= 0 and abs(residual(polished)) < abs(residual(y)):
            y = polished
    return y
