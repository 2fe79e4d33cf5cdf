"""Unit tests for the Monte Carlo verification harness"""

import numpy as np
import pytest

from levybounds.exceptions import InfiniteMean
from levybounds.levy_processes.common_families.compound_poisson import CompoundPoissonFamily
from levybounds.levy_processes.common_families.stable import StableFamily
from levybounds.levy_processes.common_families.truncated_stable import TruncatedStableFamily
from levybounds.levy_processes.simulation.rng_streams import RngStreamSpec
from levybounds.levy_processes.verification.harness import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    VerificationReport,
    check_tail,
    combine_verdicts,
    family_label,
    verify_MR,
    verify_thm1,
    verify_thm2,
    verify_thm3,
)
from levybounds.levy_processes.verification.lipschitz import LipschitzFunction

NORM = LipschitzFunction.norm()
DEVIATIONS = (np.arange(1000) + 0.5) / 1000.0


def test_check_tail_verdicts() -> None:
    assert check_tail(DEVIATIONS, 0.9, 0.5, 0.0, 0.0).verdict == PASS
    assert check_tail(DEVIATIONS, 0.9, 0.01, 0.0, 0.0).verdict == FAIL
    assert check_tail(DEVIATIONS, 0.9, 0.1, 0.0, 0.0).verdict == INCONCLUSIVE
    check = check_tail(DEVIATIONS, 0.9, 0.5, 0.0, 0.0)
    assert check.empirical == pytest.approx(0.1)
    assert check.ci_low < 0.1 < check.ci_high


def test_check_tail_lower_side() -> None:
    check = check_tail(DEVIATIONS, 0.9, 0.01, 0.0, 0.0, side="lower")
    assert check.empirical == 0.0
    assert check.verdict == PASS


def test_check_tail_slack_makes_inconclusive() -> None:
    assert check_tail(DEVIATIONS, 0.9, 0.2, 0.2, 0.0).verdict == INCONCLUSIVE
    assert check_tail(DEVIATIONS, 0.9, 0.5, 0.0, 0.4).verdict == INCONCLUSIVE


def test_combine_verdicts() -> None:
    assert combine_verdicts([PASS, PASS]) == PASS
    assert combine_verdicts([PASS, INCONCLUSIVE]) == INCONCLUSIVE
    assert combine_verdicts([INCONCLUSIVE, FAIL, PASS]) == FAIL
    assert combine_verdicts([]) == INCONCLUSIVE


def test_report_total_slack() -> None:
    report = VerificationReport("thm1", "x", "norm", 1.0, 10, 0, 0, mc_slack=0.1, bias_slack=0.2, center_slack=0.3)
    assert report.total_slack == pytest.approx(0.6)
    assert report.as_dict()["total_slack"] == pytest.approx(0.6)


def test_family_label() -> None:
    assert family_label(StableFamily(1.0)) == "stable(alpha=1, K=1)"


def test_thm1_cauchy_passes() -> None:
    report = verify_thm1(StableFamily(1.0), 1.0, 0.25, NORM, 20_000, RngStreamSpec(1))
    assert report.bound == pytest.approx(37.3, abs=0.1)
    assert report.empirical == pytest.approx(np.pi, abs=0.2)
    assert report.ci_low <= report.empirical <= report.ci_high
    assert report.bias_slack == 0.0
    assert report.verdict == PASS


def test_thm1_scaled_bound_fails() -> None:
    report = verify_thm1(StableFamily(1.0), 1.0, 0.25, NORM, 20_000, RngStreamSpec(1), bound_scale=0.01)
    assert report.verdict == FAIL
    assert report.notes


def test_thm1_linear_function() -> None:
    f = LipschitzFunction.linear([1.0])
    report = verify_thm1(StableFamily(1.0), 1.0, 0.25, f, 20_000, RngStreamSpec(2), level=0.9999)
    assert report.f == "linear(1.0)"
    assert report.ci_low == 0.0
    assert report.verdict == PASS


def test_thm1_truncated_stable() -> None:
    report = verify_thm1(TruncatedStableFamily(1.0, 1.0, 1.0), 0.05, 0.25, NORM, 5000, RngStreamSpec(3))
    assert report.extras["h"] == pytest.approx(0.4)
    assert 0 < report.bias_slack < 1e-3
    assert report.displacement > 0
    assert report.verdict == PASS


def test_thm1_condition_violated_is_inconclusive() -> None:
    report = verify_thm1(StableFamily(1.0), 1.0, 0.6, NORM, 1000, RngStreamSpec(0))
    assert report.verdict == INCONCLUSIVE
    assert report.bound is None
    assert "median_regime condition" in report.notes[0]


def test_thm1_is_reproducible() -> None:
    fam = TruncatedStableFamily(1.0, 1.0, 1.0)
    first = verify_thm1(fam, 0.05, 0.25, NORM, 9000, RngStreamSpec(5, 2), workers=1)
    second = verify_thm1(fam, 0.05, 0.25, NORM, 9000, RngStreamSpec(5, 2), workers=3)
    assert first.as_dict() == second.as_dict()


def test_thm2_cauchy_passes() -> None:
    report = verify_thm2(StableFamily(1.0), 1.0, 0.2, NORM, 20_000, RngStreamSpec(4))
    assert report.c == pytest.approx(0.1)
    assert report.extras["h"] == pytest.approx(20.0)
    assert report.threshold == pytest.approx(45.3, abs=0.2)
    assert report.bound == 0.2
    assert len(report.extras["tails"]) == 2
    assert len(report.extras["curve"]) == 5
    assert report.verdict == PASS


def test_thm2_infinite_A_is_inconclusive() -> None:
    fam = CompoundPoissonFamily(1.0, atoms=[(1.0, 1.0)])
    report = verify_thm2(fam, 1.0, 0.2, NORM, 1000, RngStreamSpec(0))
    assert report.verdict == INCONCLUSIVE
    assert report.threshold is None


def test_thm3_requires_finite_mean() -> None:
    with pytest.raises(InfiniteMean):
        verify_thm3(StableFamily(1.0), 1.0, 0.1, NORM, 1000, RngStreamSpec(0))


def test_thm3_requires_centered_process() -> None:
    report = verify_thm3(StableFamily(1.5, drift=[1.0]), 1.0, 0.1, NORM, 1000, RngStreamSpec(0))
    assert report.verdict == INCONCLUSIVE
    assert "centered" in report.notes[0]


def test_thm3_truncated_stable_passes() -> None:
    report = verify_thm3(TruncatedStableFamily(1.5, 1.0, 1.0), 0.05, 0.1, NORM, 5000, RngStreamSpec(6))
    assert report.c == pytest.approx(0.15)
    assert report.extras["K"] == pytest.approx(1.0)
    assert report.threshold > report.extras["h"]
    assert report.verdict == PASS


def test_mean_sandwich_stable() -> None:
    report = verify_MR(StableFamily(1.5), 0.125, 20_000, RngStreamSpec(7))
    assert report.extras["x0"] == pytest.approx(1.0, rel=1e-9)
    assert report.threshold == pytest.approx(0.25)
    assert report.bound == pytest.approx(1.25)
    assert report.extras["sandwich_holds"] is True
    assert report.empirical > 0.25
    assert report.verdict != FAIL


@pytest.mark.parametrize("t", np.geomspace(1e-3, 1e3, 7))
def test_h_sandwich_holds_over_time(t) -> None:
    report = verify_MR(StableFamily(1.5), float(t), 2000, RngStreamSpec(9))
    assert report.extras["sandwich_holds"] is True
    assert report.extras["h_1"] <= report.extras["x0"]
    assert report.extras["x0"] == pytest.approx(report.extras["h_sandwich"], rel=1e-9)
    assert not any("fails" in note for note in report.notes)
    assert report.verdict != FAIL


def test_mean_sandwich_needs_finite_mean() -> None:
    report = verify_MR(StableFamily(1.0), 1.0, 1000, RngStreamSpec(0))
    assert report.verdict == INCONCLUSIVE
