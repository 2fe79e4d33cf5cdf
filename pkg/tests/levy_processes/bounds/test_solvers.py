"""Unit tests for the implicit-equation solvers"""

import math

import numpy as np
import pytest

from levybounds.exceptions import InfiniteMean, LevelNeverAttained
from levybounds.levy_processes.bounds.solvers import (
    bennett_exponent,
    g_c,
    h_c,
    leftmost_level_crossing,
    x0_MR,
)
from levybounds.levy_processes.levy_measures import LevyMeasure, ScaleFunctions
from levybounds.levy_processes.radial_parts import AtomicRadial, PowerLawRadial


def test_bennett_exponent() -> None:
    assert bennett_exponent(0.0, 1.0) == 0.0
    values = bennett_exponent(np.linspace(0.0, 10.0, 50), 0.3)
    assert np.all(np.diff(values) < 0)


def test_g_c_known_values() -> None:
    assert g_c(1.0, 0.25) == pytest.approx(2.0813, abs=1e-3)
    assert g_c(0.25, 0.25) == pytest.approx(1.2212, abs=1e-3)
    assert g_c(0.7, 1.0) == 0.0


def test_g_c_solves_its_equation() -> None:
    for c in (1e-3, 0.1, 1.0, 50.0):
        for x in (1e-12, 0.01, 0.25, 0.9):
            y = g_c(c, x)
            assert y >= 0
            assert y - (y + c) * math.log1p(y / c) == pytest.approx(math.log(x), rel=1e-9, abs=1e-12)


def test_g_c_decreasing_in_x() -> None:
    values = [g_c(0.5, x) for x in (0.01, 0.1, 0.5, 0.99)]
    assert values == sorted(values, reverse=True)


def test_g_c_small_q_limit() -> None:
    # c = q/2A with A = 1, evaluated at q/2
    assert abs(g_c(0.5e-6, 0.5e-6) - 1.0) < 0.1
    assert abs(g_c(0.5e-30, 0.5e-30) - 1.0) < 0.02


def test_g_c_domain() -> None:
    with pytest.raises(ValueError):
        g_c(0.0, 0.5)
    with pytest.raises(ValueError):
        g_c(1.0, 0.0)
    with pytest.raises(ValueError):
        g_c(1.0, 1.5)


def test_h_c_stable_closed_form() -> None:
    sf = ScaleFunctions(LevyMeasure(PowerLawRadial(1.0)))
    # V(x)/x^2 = 2/x, so h_c(t) = 2t/c
    assert h_c(sf, 0.25, 1.0) == pytest.approx(8.0, rel=1e-10)
    assert h_c(sf, 1.0, 3e-9) == pytest.approx(6e-9, rel=1e-10)


def test_h_c_truncated_stable_regimes() -> None:
    sf = ScaleFunctions(LevyMeasure(PowerLawRadial(1.0, 1.0)))
    assert h_c(sf, 0.25, 0.1) == pytest.approx(0.8, rel=1e-10)
    assert h_c(sf, 0.25, 0.5) == pytest.approx(2.0, rel=1e-10)
    assert h_c(sf, 0.25, 0.125) == pytest.approx(1.0, rel=1e-9)


def test_h_c_invalid_arguments() -> None:
    sf = ScaleFunctions(LevyMeasure(PowerLawRadial(1.0)))
    with pytest.raises(ValueError):
        h_c(sf, 0.0, 1.0)
    with pytest.raises(ValueError):
        h_c(sf, 1.0, -1.0)


def test_h_c_compound_poisson_level_never_attained() -> None:
    # V(x)/x^2 <= 2/x^2 for unit atoms of total mass 2 and vanishes below the atom
    sf = ScaleFunctions(LevyMeasure(AtomicRadial([1.0])))
    with pytest.raises(LevelNeverAttained):
        h_c(sf, 10.0, 1.0)
    assert h_c(sf, 0.5, 1.0) == pytest.approx(2.0, rel=1e-10)


def test_leftmost_level_crossing_skips_jumps() -> None:
    # jumps from 0 to 4 at x = 1, then decays like 4/x^2, so level 1 is first met at x = 2
    def step(x: float) -> float:
        return 0.0 if x < 1.0 else 4.0 / x**2

    root = leftmost_level_crossing(step, 1.0, np.geomspace(0.01, 100.0, 41))
    assert root == pytest.approx(2.0, rel=1e-10)


def test_leftmost_level_crossing_expands_grid() -> None:
    root = leftmost_level_crossing(lambda x: 1.0 / x, 1e-7, np.geomspace(1.0, 10.0, 5))
    assert root == pytest.approx(1e7, rel=1e-10)


def test_x0_stable() -> None:
    sf = ScaleFunctions(LevyMeasure(PowerLawRadial(1.5)))
    assert x0_MR(sf, 0.125) == pytest.approx(1.0, rel=1e-10)
    assert h_c(sf, 1.0, 0.125) == pytest.approx(0.5 ** (2.0 / 3.0), rel=1e-10)


def test_x0_infinite_mean() -> None:
    sf = ScaleFunctions(LevyMeasure(PowerLawRadial(1.0)))
    with pytest.raises(InfiniteMean):
        x0_MR(sf, 1.0)


SOLVER_MEASURES = (
    LevyMeasure(PowerLawRadial(0.7)),
    LevyMeasure(PowerLawRadial(1.5, 1.0)),
    LevyMeasure(PowerLawRadial(1.0), weights=(0.5, 2.0)),
)
C_VALUES = np.geomspace(0.05, 5.0, 6)
T_VALUES = np.geomspace(1e-3, 1e2, 6)


@pytest.mark.parametrize("measure", SOLVER_MEASURES)
def test_h_c_monotone_in_c_and_t(measure) -> None:
    sf = ScaleFunctions(measure)
    table = np.array([[h_c(sf, c, t) for t in T_VALUES] for c in C_VALUES])
    assert np.all(np.diff(table, axis=0) <= 0)
    assert np.all(np.diff(table, axis=1) >= 0)


@pytest.mark.parametrize("measure", SOLVER_MEASURES)
def test_h_c_residual(measure) -> None:
    sf = ScaleFunctions(measure)
    for c in C_VALUES:
        for t in T_VALUES:
            h = h_c(sf, c, t)
            assert abs(sf.V(h) / h**2 - c / t) <= 1e-9 * c / t


@pytest.mark.parametrize("measure", (LevyMeasure(PowerLawRadial(1.5)), LevyMeasure(PowerLawRadial(1.5, 1.0))))
def test_x0_residual(measure) -> None:
    sf = ScaleFunctions(measure)
    for t in T_VALUES:
        x = x0_MR(sf, t)
        assert abs(sf.V(x) / x**2 + sf.M_tail(x) / x - 1.0 / t) <= 1e-9 / t
