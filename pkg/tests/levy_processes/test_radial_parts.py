"""Unit tests for radial parts"""

import math

import numpy as np
import pytest
from scipy import stats

from levybounds.exceptions import SamplingError
from levybounds.levy_processes.radial_parts import (
    AtomicRadial,
    DistributionRadial,
    NumericRadialDensity,
    PowerLawRadial,
    log_quad,
)


def test_log_quad_power_singularity() -> None:
    # int_0^1 r^(-1/2) dr = 2
    assert log_quad(lambda r: r**-0.5, 0.0, 1.0) == pytest.approx(2.0, rel=1e-9)
    assert log_quad(lambda r: math.exp(-r), 0.0, math.inf) == pytest.approx(1.0, rel=1e-9)
    assert log_quad(lambda r: 1.0, 2.0, 1.0) == 0.0


def test_power_law_closed_forms() -> None:
    radial = PowerLawRadial(1.0, 1.0)
    assert radial.truncated_second_moment(0.5) == pytest.approx(0.5)
    assert radial.truncated_second_moment(3.0) == pytest.approx(1.0)
    assert radial.tail_mass(0.5) == pytest.approx(1.0)
    assert radial.tail_mass(1.0) == 0.0
    assert radial.shell_first_moment(0.5, 1.0) == pytest.approx(math.log(2.0))
    assert radial.tail_first_moment(2.0) == 0.0


def test_power_law_infinite_first_moment() -> None:
    assert math.isinf(PowerLawRadial(1.0).tail_first_moment(1.0))
    assert PowerLawRadial(1.5).tail_first_moment(1.0) == pytest.approx(2.0)


def test_power_law_invalid_parameters() -> None:
    with pytest.raises(ValueError):
        PowerLawRadial(2.0)
    with pytest.raises(ValueError):
        PowerLawRadial(1.0, 0.0)


def test_power_law_inverse_tail_mass() -> None:
    radial = PowerLawRadial(1.5, 2.0)
    radii = np.array([0.01, 0.3, 1.0, 1.9])
    levels = np.array([radial.tail_mass(r) for r in radii])
    assert np.allclose(radial.inverse_tail_mass(levels), radii, rtol=1e-12)


def test_power_law_limit_ratios() -> None:
    assert PowerLawRadial(1.0).limit_ratios() == (1.0, math.inf)
    assert PowerLawRadial(1.5).limit_ratios() == pytest.approx((1.0 / 3.0, 1.0))


def test_power_law_matches_quadrature() -> None:
    closed = PowerLawRadial(0.7, 3.0)
    numeric = NumericRadialDensity(closed.density, r_max=3.0)
    for R in (0.01, 0.5, 2.0):
        assert numeric.truncated_second_moment(R) == pytest.approx(closed.truncated_second_moment(R), rel=1e-8)
        assert numeric.tail_mass(R) == pytest.approx(closed.tail_mass(R), rel=1e-8)
        assert numeric.tail_first_moment(R) == pytest.approx(closed.tail_first_moment(R), rel=1e-8)


def test_numeric_tail_first_moment_extrapolation() -> None:
    numeric = NumericRadialDensity(PowerLawRadial(1.5).density)
    assert numeric.tail_first_moment(1.0) == pytest.approx(2.0, rel=1e-3)


def test_numeric_tail_first_moment_divergent() -> None:
    numeric = NumericRadialDensity(PowerLawRadial(1.0).density)
    assert math.isinf(numeric.tail_first_moment(1.0))


def test_atomic_radial() -> None:
    radial = AtomicRadial([2.0, 1.0], [1.0, 3.0])
    assert radial.probabilities.tolist() == [0.75, 0.25]
    assert radial.truncated_second_moment(1.5) == pytest.approx(0.75)
    assert radial.tail_mass(1.0) == pytest.approx(0.25)
    assert radial.tail_mass(0.5) == pytest.approx(1.0)
    assert radial.tail_first_moment(0.5) == pytest.approx(1.25)
    assert radial.activity() == 1.0
    assert radial.describe() == {"kind": "atoms", "atoms": [[1.0, 0.75], [2.0, 0.25]]}


def test_atomic_inverse_tail_mass() -> None:
    radial = AtomicRadial([1.0, 2.0], [0.75, 0.25])
    u = np.array([1.0, 0.5, 0.26, 0.25, 0.1])
    assert radial.inverse_tail_mass(u).tolist() == [1.0, 1.0, 1.0, 2.0, 2.0]


def test_atomic_invalid() -> None:
    with pytest.raises(ValueError):
        AtomicRadial([])
    with pytest.raises(ValueError):
        AtomicRadial([-1.0])
    with pytest.raises(ValueError):
        AtomicRadial([1.0], [0.0])


def test_distribution_radial() -> None:
    radial = DistributionRadial(stats.expon(scale=2.0), "expon", {"scale": 2.0})
    assert radial.tail_mass(2.0) == pytest.approx(math.exp(-1.0))
    assert radial.tail_first_moment(0.0) == pytest.approx(2.0, rel=1e-8)
    # int_0^inf r^2 e^{-r/2}/2 dr = 8
    assert radial.truncated_second_moment(math.inf) == pytest.approx(8.0, rel=1e-8)
    assert radial.describe() == {"kind": "jump_law", "name": "expon", "params": {"scale": 2.0}}


def test_distribution_radial_rejects_negative_support() -> None:
    with pytest.raises(ValueError):
        DistributionRadial(stats.norm())


def test_sample_shell_within_bounds() -> None:
    radial = PowerLawRadial(1.0, 1.0)
    u = 1.0 - np.random.default_rng(3).random(1000)
    radii = radial.sample_shell(0.01, 1.0, u)
    assert np.all(radii > 0.01 * (1 - 1e-12))
    assert np.all(radii <= 1.0 * (1 + 1e-12))


def test_sample_shell_from_origin_needs_finite_activity() -> None:
    with pytest.raises(SamplingError):
        PowerLawRadial(1.0).sample_shell(0.0, 1.0, np.array([0.5]))


def test_fourier_integrals_cauchy() -> None:
    # int_0^inf (1 - cos r) r^-2 dr = pi/2
    cos_part, sin_part = PowerLawRadial(1.0).fourier_integrals(1.0)
    assert cos_part == pytest.approx(math.pi / 2.0, rel=1e-6)
    assert math.isfinite(sin_part)
