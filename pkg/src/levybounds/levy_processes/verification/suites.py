"""
This module runs batches of verification jobs and writes their reports.

Job i draws from stream i of the master seed, so the reports depend only on the
seed and the job list, never on the number of workers or the completion order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ...exceptions import HypothesisError
from ..common_families.stable import StableFamily
from ..common_families.truncated_stable import TruncatedStableFamily, median_c
from ..simulation.rng_streams import RngStreamSpec
from ..simulation.samplers import EpsilonPolicy
from .harness import (
    FAIL,
    INCONCLUSIVE,
    VerificationReport,
    family_label,
    verify_MR,
    verify_thm1,
    verify_thm2,
    verify_thm3,
)
from .lipschitz import LipschitzFunction
from .statistics import DEFAULT_LEVEL

logger = logging.getLogger(__name__)

THEOREMS = ("thm1", "thm2", "thm3", "MR")
DEFAULT_N = 100_000

CSV_COLUMNS = (
    "job",
    "theorem",
    "family",
    "f",
    "t",
    "c",
    "q",
    "n",
    "seed",
    "stream",
    "threshold",
    "bound",
    "empirical",
    "ci_low",
    "ci_high",
    "mc_slack",
    "bias_slack",
    "displacement",
    "center_slack",
    "total_slack",
    "verdict",
)


@dataclass
class VerificationJob:
    """One check: a theorem applied to a family at time t with parameter c (thm1) or q (thm2, thm3).

    Args:
        theorem (str): one of "thm1", "thm2", "thm3", "MR".
        family (object): a family object or a LevyMeasure.
        t (float): the time.
        c (float): the median-bound parameter, thm1 only.
        q (float): the tail level, thm2 and thm3 only.
        f (LipschitzFunction): the test function, the norm by default.
        n (int): the number of samples, None for the runner's default.
        bound_scale (float): multiplies the thm1 bound, for harness self-tests.
    """

    theorem: str
    family: object
    t: float
    c: float | None = None
    q: float | None = None
    f: LipschitzFunction = field(default_factory=LipschitzFunction.norm)
    n: int | None = None
    bound_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.theorem not in THEOREMS:
            raise ValueError(f"unknown theorem {self.theorem!r}, expected one of {THEOREMS}")
        if self.theorem == "thm1" and self.c is None:
            raise ValueError("thm1 needs c")
        if self.theorem in ("thm2", "thm3") and self.q is None:
            raise ValueError(f"{self.theorem} needs q")

    def run(
        self,
        rng: RngStreamSpec,
        n: int,
        level: float = DEFAULT_LEVEL,
        epsilon_policy: EpsilonPolicy | None = None,
    ) -> VerificationReport:
        n = self.n or n
        if self.theorem == "thm1":
            return verify_thm1(
                self.family, self.t, self.c, self.f, n, rng, level, epsilon_policy, bound_scale=self.bound_scale
            )
        if self.theorem == "thm2":
            return verify_thm2(self.family, self.t, self.q, self.f, n, rng, level, epsilon_policy)
        if self.theorem == "thm3":
            return verify_thm3(self.family, self.t, self.q, self.f, n, rng, level, epsilon_policy)
        return verify_MR(self.family, self.t, n, rng, level, epsilon_policy)


def default_suite(theorems=THEOREMS) -> list[VerificationJob]:
    """The default checks: Cauchy and truncated stable families on both sides of their regime switch."""
    cauchy = StableFamily(1.0)
    truncated = TruncatedStableFamily(1.0, 1.0, 1.0)
    truncated_finite_mean = TruncatedStableFamily(1.5, 1.0, 1.0)
    stable_finite_mean = StableFamily(1.5)
    jobs = [
        VerificationJob("thm1", cauchy, 1.0, c=0.25),
        VerificationJob("thm1", truncated, 0.05, c=median_c(1.0)),
        VerificationJob("thm1", truncated, 0.5, c=median_c(1.0)),
    ]
    for q in (0.1, 0.2):
        jobs.append(VerificationJob("thm2", cauchy, 1.0, q=q))
        jobs.append(VerificationJob("thm2", truncated, 0.02, q=q))
    for q in (0.1, 0.2):
        jobs.append(VerificationJob("thm3", truncated_finite_mean, 0.05, q=q))
    jobs.append(VerificationJob("MR", stable_finite_mean, 0.125))
    jobs.append(VerificationJob("MR", truncated_finite_mean, 0.125))
    return [job for job in jobs if job.theorem in theorems]


def self_test_suite() -> list[VerificationJob]:
    """A check that must FAIL: the Cauchy median bound divided by 100."""
    return [VerificationJob("thm1", StableFamily(1.0), 1.0, c=0.25, bound_scale=0.01)]


def _run_job(
    index: int,
    job: VerificationJob,
    seed: int,
    n: int,
    level: float,
    epsilon_policy: EpsilonPolicy | None,
) -> VerificationReport:
    rng = RngStreamSpec(seed).with_stream(index)
    logger.info("job %d: %s at t=%g on %r", index, job.theorem, job.t, job.family)
    try:
        report = job.run(rng, n, level, epsilon_policy)
    except HypothesisError as error:
        report = VerificationReport(
            theorem=job.theorem,
            family=family_label(job.family),
            f=job.f.describe(),
            t=job.t,
            n=job.n or n,
            seed=seed,
            stream=index,
            c=job.c,
            q=job.q,
            level=level,
            verdict=INCONCLUSIVE,
            notes=[str(error)],
        )
        logger.warning("job %d is inconclusive: %s", index, error)
    logger.info("job %d: %s", index, report.verdict)
    return report


def run_suite(
    jobs: list[VerificationJob],
    seed: int,
    n: int = DEFAULT_N,
    workers: int = 1,
    level: float = DEFAULT_LEVEL,
    epsilon_policy: EpsilonPolicy | None = None,
) -> list[VerificationReport]:
    """Runs the jobs, job i on stream i of the seed, and returns the reports in job order."""
    arguments = [(index, job, seed, n, level, epsilon_policy) for index, job in enumerate(jobs)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda args: _run_job(*args), arguments))
    return [_run_job(*args) for args in arguments]


def any_failed(reports: list[VerificationReport]) -> bool:
    return any(report.verdict == FAIL for report in reports)


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _to_plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not serialisable")


def reports_to_csv(reports: list[VerificationReport]) -> str:
    """One row per report, columns CSV_COLUMNS, floats as shortest round-trip decimals."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for index, report in enumerate(reports):
        record = report.as_dict()
        record["job"] = index
        writer.writerow([_format(record[column]) for column in CSV_COLUMNS])
    return buffer.getvalue()


def reports_to_json(reports: list[VerificationReport]) -> str:
    records = []
    for index, report in enumerate(reports):
        record = report.as_dict()
        record["job"] = index
        records.append(record)
    return json.dumps(records, indent=2, sort_keys=True, default=_to_plain) + "\n"


def write_reports(reports: list[VerificationReport], path, fmt: str = "csv") -> Path:
    path = Path(path)
    if fmt == "csv":
        path.write_text(reports_to_csv(reports), encoding="utf-8")
    elif fmt == "json":
        path.write_text(reports_to_json(reports), encoding="utf-8")
    else:
        raise ValueError(f"unknown report format {fmt!r}, expected 'csv' or 'json'")
    return path
