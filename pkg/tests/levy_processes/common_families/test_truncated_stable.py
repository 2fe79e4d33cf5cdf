"""Unit tests for the truncated stable family"""

import math

import pytest

from levybounds.levy_processes.bounds.solvers import g_c, h_c
from levybounds.levy_processes.common_families.truncated_stable import (
    G_t,
    H_alpha,
    K_alpha,
    TruncatedStableFamily,
    c_alpha,
    median_c,
    regime_switch_time,
    trunc_h,
    trunc_tail_bound,
    trunc_threshold,
    truncation_level_c,
)


def test_scale_function_oracles() -> None:
    sf = TruncatedStableFamily(1.0, 1.0, 1.0).scale_functions
    assert sf.V(0.5) == pytest.approx(1.0)
    assert sf.nu_bar(0.5) == pytest.approx(2.0)


def test_trunc_h_regimes() -> None:
    fam = TruncatedStableFamily(1.0, 1.0, 1.0)
    assert regime_switch_time(fam, 0.25) == pytest.approx(0.125)
    assert trunc_h(fam, 0.25, 0.1) == pytest.approx(0.8)
    assert trunc_h(fam, 0.25, 0.5) == pytest.approx(2.0)
    switch = regime_switch_time(fam, 0.25)
    assert trunc_h(fam, 0.25, switch * (1 - 1e-12)) == pytest.approx(trunc_h(fam, 0.25, switch * (1 + 1e-12)))


@pytest.mark.parametrize("alpha", (0.3, 0.7, 1.0, 1.5, 1.9))
def test_trunc_h_matches_solver_on_a_grid(alpha) -> None:
    fam = TruncatedStableFamily(alpha, 1.0, 1.0)
    sf = fam.scale_functions
    regimes = set()
    for c in (0.01, 0.1, 0.5, 1.0, 5.0):
        for t in (1e-4, 1e-2, 1.0, 10.0, 1e3):
            regimes.add(t <= regime_switch_time(fam, c))
            assert h_c(sf, c, t) == pytest.approx(trunc_h(fam, c, t), rel=1e-10)
    assert regimes == {True, False}


def test_trunc_h_matches_solver_with_scaled_parameters() -> None:
    fam = TruncatedStableFamily(1.5, 2.0, 3.0)
    for c, t in ((0.25, 0.01), (0.25, 0.5), (1.0, 3.0)):
        assert h_c(fam.scale_functions, c, t) == pytest.approx(trunc_h(fam, c, t), rel=1e-10)


def log_slope(func, t1: float, t2: float) -> float:
    return (math.log(func(t2)) - math.log(func(t1))) / (math.log(t2) - math.log(t1))


@pytest.mark.parametrize("alpha", (0.5, 1.0, 1.5))
def test_H_alpha_slopes_on_both_sides_of_the_switch(alpha) -> None:
    fam = TruncatedStableFamily(alpha, 1.0, 1.0)
    c = median_c(alpha)
    switch = regime_switch_time(fam, c)

    def closed(t: float) -> float:
        return H_alpha(fam, t)

    def solved(t: float) -> float:
        return h_c(fam.scale_functions, c, t)

    for func in (closed, solved):
        assert log_slope(func, switch / 1000.0, switch / 100.0) == pytest.approx(1.0 / alpha, abs=1e-3)
        assert log_slope(func, switch * 100.0, switch * 1000.0) == pytest.approx(0.5, abs=1e-3)


def test_median_prefactor() -> None:
    assert median_c(1.0) == pytest.approx(0.25)
    assert K_alpha(1.0) == pytest.approx(1.0 + 3.0 * g_c(0.25, 0.25))
    assert K_alpha(1.0) == pytest.approx(4.66, abs=0.01)
    assert H_alpha(TruncatedStableFamily(1.0, 1.0, 1.0), 0.1) == pytest.approx(0.8)
    with pytest.raises(ValueError):
        K_alpha(2.0)


def test_c_alpha() -> None:
    assert c_alpha(1.0) == pytest.approx(1.0 + (1.0 + 2.0 * math.e) / 2.0)
    assert c_alpha(1.0) == pytest.approx(4.218, abs=1e-3)
    assert c_alpha(0.1) == pytest.approx(2.0)


def test_G_t() -> None:
    fam = TruncatedStableFamily(1.0, 1.0, 1.0)
    assert G_t(fam, 0.1, 0.5) == 1.0
    assert truncation_level_c(fam, 0.1) == pytest.approx(0.1)
    assert G_t(fam, 0.1, 1.0 + g_c(0.1, 0.01)) == pytest.approx(0.01, rel=1e-9)


def test_trunc_tail_bound() -> None:
    fam = TruncatedStableFamily(1.0, 1.0, 1.0)
    assert trunc_tail_bound(fam, 0.1, 1e-3) == 1.0
    values = [trunc_tail_bound(fam, 0.1, x) for x in (0.5, 1.0, 2.0, 5.0, 10.0)]
    assert values == sorted(values, reverse=True)
    assert all(0 < value <= 1 for value in values)
    with pytest.raises(ValueError):
        trunc_tail_bound(fam, 0.1, 0.0)


def test_trunc_threshold() -> None:
    fam = TruncatedStableFamily(1.0, 1.0, 1.0)
    q, t = 0.1, 0.02
    threshold = trunc_threshold(fam, q, t)
    scale_threshold = c_alpha(1.0) * 2.0 * t / q
    truncation_threshold = 1.0 + g_c(truncation_level_c(fam, t), q / 2.0)
    assert threshold == pytest.approx(min(scale_threshold, truncation_threshold))
    with pytest.raises(ValueError):
        trunc_threshold(fam, 1.5, t)


def test_truncated_family_invalid() -> None:
    with pytest.raises(ValueError):
        TruncatedStableFamily(1.0, 1.0, math.inf)
    with pytest.raises(ValueError):
        TruncatedStableFamily(1.0, 0.0, 1.0)
    assert not TruncatedStableFamily(1.0).is_pure()
