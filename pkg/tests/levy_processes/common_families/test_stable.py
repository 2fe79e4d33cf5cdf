"""Unit tests for stable families"""

import math

import pytest

from levybounds.levy_processes.bounds.solvers import h_c
from levybounds.levy_processes.common_families.stable import (
    StableFamily,
    projection_moment,
    stable_A,
    stable_h,
    stable_K,
    stable_scale,
)

ALPHAS = (0.3, 0.7, 1.0, 1.5, 1.9)
C_GRID = (0.01, 0.1, 0.5, 1.0, 5.0)
T_GRID = (1e-4, 1e-2, 1.0, 10.0, 1e3)


def test_stable_measure() -> None:
    fam = StableFamily(1.5, 2.0)
    assert fam.mass == pytest.approx(4.0)
    assert fam.measure is fam.measure
    assert fam.measure.is_process_symmetric()
    assert fam.is_pure()
    assert fam.describe() == {"family": "stable", "alpha": 1.5, "intensity": 2.0, "dimension": 1}


def test_asymmetric_stable_is_not_pure() -> None:
    assert not StableFamily(1.5, weights=(1.0, 2.0)).is_pure()


def test_stable_invalid() -> None:
    with pytest.raises(ValueError):
        StableFamily(0.0)
    with pytest.raises(ValueError):
        StableFamily(1.0, -1.0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_stable_h_matches_solver_on_a_grid(alpha) -> None:
    fam = StableFamily(alpha)
    for c in C_GRID:
        for t in T_GRID:
            assert h_c(fam.scale_functions, c, t) == pytest.approx(stable_h(fam, c, t), rel=1e-10)


def test_stable_h_matches_solver_in_higher_dimension() -> None:
    for fam in (StableFamily(0.5, 3.0), StableFamily(1.7, dimension=3)):
        for c, t in ((0.25, 1.0), (1.0, 1e-3), (0.05, 20.0)):
            assert h_c(fam.scale_functions, c, t) == pytest.approx(stable_h(fam, c, t), rel=1e-10)


def test_stable_constants() -> None:
    assert stable_A(StableFamily(1.0)) == pytest.approx(1.0)
    assert stable_A(StableFamily(1.5)) == pytest.approx(1.0 / 3.0)
    assert stable_K(StableFamily(1.5)) == pytest.approx(1.0)
    assert math.isinf(stable_K(StableFamily(0.8)))
    fam = StableFamily(1.2)
    assert fam.scale_functions.A_constant() == pytest.approx(stable_A(fam))
    assert fam.scale_functions.K_constant() == pytest.approx(stable_K(fam))


def test_cauchy_scale_is_pi_t() -> None:
    assert stable_scale(StableFamily(1.0), 1.0) == pytest.approx(math.pi, rel=1e-6)
    assert stable_scale(StableFamily(1.0), 0.5) == pytest.approx(math.pi / 2.0, rel=1e-6)


def test_stable_scale_gamma_formula() -> None:
    # int_0^inf (1 - cos r) r^(-1-alpha) dr = Gamma(1 - alpha) cos(pi alpha/2) / alpha
    alpha = 0.6
    expected = 2.0 * math.gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2.0) / alpha
    assert stable_scale(StableFamily(alpha), 1.0) == pytest.approx(expected ** (1.0 / alpha), rel=1e-6)


def test_projection_moment() -> None:
    assert projection_moment(1.3, 1) == 1.0
    # theta_1 is uniform on [-1, 1] in dimension three
    assert projection_moment(1.0, 3) == pytest.approx(0.5, rel=1e-9)
    assert projection_moment(2.0, 3) == pytest.approx(1.0 / 3.0, rel=1e-9)


def test_stable_scale_rejects_nonpositive_time() -> None:
    with pytest.raises(ValueError):
        stable_scale(StableFamily(1.0), 0.0)
