"""
This module gathers every bound at a given time into a BoundReport.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ...exceptions import HypothesisError, RootFindingError
from ..levy_measures import LevyMeasure, ScaleFunctions
from .solvers import g_c, h_c, x0_MR
from .theorems import (
    CONDITION_RTOL,
    STANDARD_CONDITION,
    median_bound,
    thm2_threshold,
    thm3_threshold,
)

logger = logging.getLogger(__name__)

MEAN_LOWER_FACTOR = 0.25
MEAN_UPPER_FACTOR = 17.0 / 8.0
SYMMETRIC_MEAN_UPPER_FACTOR = 1.25


@dataclass
class BoundReport:
    """Every bound evaluated at one time t.

    Optional entries are None when their hypothesis constant (A or K) is infinite
    or the underlying equation has no solution; the reason is kept in notes.
    """

    # pylint: disable=too-many-instance-attributes

    t: float
    c: float
    q: float | None
    A: float
    K: float
    h: float
    g_value: float
    condition_3: bool
    condition_3_value: float
    median_bound: float | None
    median_bound_refined: float | None
    E_c: float
    thm2_threshold: float | None = None
    thm3_threshold: float | None = None
    x0: float | None = None
    mean_lower: float | None = None
    mean_upper: float | None = None
    h_1: float | None = None
    h_sandwich: float | None = None
    sandwich_holds: bool | None = None
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def bound_report(
    measure: LevyMeasure,
    sf: ScaleFunctions,
    t: float,
    c: float | None = None,
    q: float | None = None,
) -> BoundReport:
    """Evaluates the median bound, the two concentration thresholds and the mean sandwich at time t.

    Either c or q may be given. With q the median bound uses c = q/2A, the value the
    concentration thresholds are built on; with neither, c = 1/4A.

    Args:
        measure (LevyMeasure): the Levy measure and drift.
        sf (ScaleFunctions): its scale functions.
        t (float): the time.
        c (float): the parameter of the median bound.
        q (float): the tail level of the concentration thresholds.

    Raises:
        ValueError: when both c and q are given.
        LevelNeverAttained: when h_c(t) does not exist.

    Returns:
        BoundReport: the report.
    """
    if c is not None and q is not None:
        raise ValueError("give either c or q, not both")
    A = sf.A_constant()
    K = sf.K_constant()
    notes = []
    if c is None:
        if not math.isfinite(A):
            raise ValueError("c must be given explicitly when the constant A is infinite")
        c = q / (2.0 * A) if q is not None else 1.0 / (4.0 * A)

    h = h_c(sf, c, t)
    condition_value = t * sf.nu_bar(h)
    standard = refined = None
    try:
        bound = median_bound(measure, sf, c, t)
        standard, refined = bound.standard, bound.refined
        drift_term = bound.E_c
    except HypothesisError as error:
        notes.append(f"median bound: {error}")
        drift_term = t * float(np.linalg.norm(measure.truncated_mean(h, sf.rtol)))

    report = BoundReport(
        t=t,
        c=c,
        q=q,
        A=A,
        K=K,
        h=h,
        g_value=g_c(c, 0.25),
        condition_3=condition_value <= STANDARD_CONDITION * (1.0 + CONDITION_RTOL),
        condition_3_value=condition_value,
        median_bound=standard,
        median_bound_refined=refined,
        E_c=drift_term,
        notes=notes,
    )
    if q is not None:
        _add_thresholds(report, sf, q, t, A, K)
    _add_mean_sandwich(report, measure, sf, t, K)
    logger.info("bounds at t=%g: h=%g median=%s", t, h, standard)
    return report


def _add_thresholds(
    report: BoundReport, sf: ScaleFunctions, q: float, t: float, A: float, K: float
) -> None:
    if not math.isfinite(A):
        report.notes.append("thresholds: the constant A is infinite")
        return
    try:
        report.thm2_threshold = thm2_threshold(sf, q, t, A)
    except (HypothesisError, RootFindingError) as error:
        report.notes.append(f"thm2 threshold: {error}")
    if not math.isfinite(K):
        report.notes.append("thm3 threshold: the constant K is infinite")
        return
    try:
        report.thm3_threshold = thm3_threshold(sf, q, t, A, K)
    except (HypothesisError, RootFindingError) as error:
        report.notes.append(f"thm3 threshold: {error}")


def _add_mean_sandwich(
    report: BoundReport, measure: LevyMeasure, sf: ScaleFunctions, t: float, K: float
) -> None:
    if not math.isfinite(K):
        report.notes.append("x0: the tail first moment or the constant K is infinite")
        return
    try:
        x0 = x0_MR(sf, t)
        report.h_1 = h_c(sf, 1.0, t)
        report.h_sandwich = h_c(sf, 1.0 / (1.0 + K), t)
    except (HypothesisError, RootFindingError) as error:
        report.notes.append(f"x0: {error}")
        return
    upper = SYMMETRIC_MEAN_UPPER_FACTOR if measure.is_process_symmetric() else MEAN_UPPER_FACTOR
    report.x0 = x0
    report.mean_lower = MEAN_LOWER_FACTOR * x0
    report.mean_upper = upper * x0
    tolerance = 1e-9 * x0
    report.sandwich_holds = report.h_1 - tolerance <= x0 <= report.h_sandwich + tolerance
