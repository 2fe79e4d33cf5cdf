"""
The levybounds command line.

    levybounds bounds   --family stable --alpha 1 --t 1 --c 0.25
    levybounds sweep    --family truncated_stable --alpha 1 --trunc 1 --t-grid 0.01 1 9
    levybounds simulate --measure cauchy.yaml --t 1 --n 10000 --out samples.f64
    levybounds verify   --seed 7 --workers 4 --out report

Exit codes: 0 success, 2 configuration error, 3 hypothesis violation, 4 a
verification check FAILed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .config import COMMANDS, FORMATS, SAMPLE_FORMATS, THEOREM_NAMES, RunConfig, resolve_config
from .exceptions import ConfigError, HypothesisError, LevyBoundsError, RootFindingError
from .levy_processes.bounds.reports import BoundReport, bound_report
from .levy_processes.bounds.theorems import scan_median_bound
from .levy_processes.common_families.truncated_stable import (
    H_alpha,
    K_alpha,
    TruncatedStableFamily,
    trunc_threshold,
)
from .levy_processes.simulation.rng_streams import RngStreamSpec
from .levy_processes.simulation.samplers import sample_process
from .levy_processes.simulation.sample_io import write_samples
from .levy_processes.verification.lipschitz import parse_lipschitz
from .levy_processes.verification.suites import (
    VerificationJob,
    any_failed,
    default_suite,
    reports_to_csv,
    reports_to_json,
    run_suite,
    self_test_suite,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_HYPOTHESIS = 3
EXIT_FAIL = 4

BOUND_COLUMNS = tuple(name for name in BoundReport.__dataclass_fields__ if name != "notes") + ("notes",)
SWEEP_COLUMNS = (
    "t",
    "c",
    "h",
    "condition_3_value",
    "median_bound",
    "refined_used",
    "H_alpha",
    "K_alpha_H_alpha",
    "trunc_threshold",
)
DEFAULT_C_GRID = (0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0, 2.0)


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, list):
        return "; ".join(str(item) for item in value)
    return str(value)


def _table(columns, rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(row.get(column)) for column in columns])
    return buffer.getvalue()


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not serialisable")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _render(cfg: RunConfig, columns, rows: list[dict]) -> str:
    if cfg.format == "json":
        return json.dumps(rows, indent=2, sort_keys=True, default=_plain) + "\n"
    return _table(columns, rows)


def cmd_bounds(cfg: RunConfig) -> int:
    """Writes one BoundReport per time; exit 3 when the median bound's condition fails somewhere."""
    family = cfg.build_family()
    measure, sf = family.measure, family.scale_functions
    rows = []
    violations = []
    for t in cfg.times():
        try:
            report = bound_report(measure, sf, t, c=cfg.c, q=cfg.q)
        except (HypothesisError, RootFindingError) as error:
            print(f"t={t!r}: {error}", file=sys.stderr)
            return EXIT_HYPOTHESIS
        if report.median_bound_refined is None:
            violations.append(f"t={t!r}: t*nu_bar(h_c(t))={report.condition_3_value!r}")
        rows.append(report.as_dict())
    _emit(_render(cfg, BOUND_COLUMNS, rows), cfg.out)
    if violations:
        for violation in violations:
            print(f"median_regime condition fails at {violation}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    """Scans the median bound over a grid of c for every time, with the truncated stable closed forms."""
    family = cfg.build_family()
    measure, sf = family.measure, family.scale_functions
    c_grid = cfg.c_grid or ([cfg.c] if cfg.c is not None else list(DEFAULT_C_GRID))
    truncated = isinstance(family, TruncatedStableFamily)
    rows = []
    for t in cfg.times():
        closed_forms = {}
        if truncated:
            scale = H_alpha(family, t)
            closed_forms = {"H_alpha": scale, "K_alpha_H_alpha": K_alpha(family.alpha) * scale}
            if cfg.q is not None:
                closed_forms["trunc_threshold"] = trunc_threshold(family, cfg.q, t)
        try:
            bounds = scan_median_bound(measure, sf, t, c_grid)
        except RootFindingError as error:
            print(f"t={t!r}: {error}", file=sys.stderr)
            return EXIT_HYPOTHESIS
        for c, bound in zip(c_grid, bounds):
            row = {"t": t, "c": c, **closed_forms}
            if bound is not None:
                row.update(
                    h=bound.h,
                    condition_3_value=bound.condition_value,
                    median_bound=bound.value,
                    refined_used=bound.refined_used,
                )
            rows.append(row)
    _emit(_render(cfg, SWEEP_COLUMNS, rows), cfg.out)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    """Samples X_t at the first configured time and dumps the values."""
    family = cfg.build_family()
    t = cfg.times()[0]
    batch = sample_process(
        family, t, cfg.n, RngStreamSpec(cfg.seed), cfg.truncation_R, cfg.epsilon_policy(), cfg.workers
    )
    write_samples(batch, cfg.out, cfg.sample_format)
    sys.stdout.write(json.dumps(batch.metadata(), indent=2, sort_keys=True, default=_plain) + "\n")
    return EXIT_OK


def _custom_jobs(cfg: RunConfig) -> list[VerificationJob]:
    family = cfg.build_family()
    f = parse_lipschitz(cfg.f, family.measure.dimension)
    jobs = []
    for t in cfg.times():
        for theorem in cfg.theorems:
            if theorem == "thm1":
                A = family.scale_functions.A_constant()
                c = cfg.c if cfg.c is not None else (1.0 / (4.0 * A) if math.isfinite(A) else 0.25)
                jobs.append(VerificationJob("thm1", family, t, c=c, f=f))
            elif theorem in ("thm2", "thm3"):
                jobs.append(VerificationJob(theorem, family, t, q=cfg.q if cfg.q is not None else 0.1, f=f))
            else:
                jobs.append(VerificationJob("MR", family, t))
    return jobs


def cmd_verify(cfg: RunConfig) -> int:
    """Runs the verification jobs; exit 4 if any check FAILs. INCONCLUSIVE rows are allowed."""
    if cfg.self_test:
        jobs = self_test_suite()
    elif cfg.has_family():
        jobs = _custom_jobs(cfg)
    else:
        jobs = default_suite(cfg.theorems)
    reports = run_suite(jobs, cfg.seed, cfg.n, cfg.workers, cfg.level, cfg.epsilon_policy())
    if cfg.out is None:
        sys.stdout.write(reports_to_json(reports) if cfg.format == "json" else reports_to_csv(reports))
    else:
        base = Path(cfg.out)
        base.with_suffix(".csv").write_text(reports_to_csv(reports), encoding="utf-8")
        base.with_suffix(".json").write_text(reports_to_json(reports), encoding="utf-8")
    return EXIT_FAIL if any_failed(reports) else EXIT_OK


COMMAND_HANDLERS = {
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    """The argument parser. Unset flags stay None so lower configuration layers show through."""
    common = argparse.ArgumentParser(add_help=False, argument_default=None)
    common.add_argument("--config", help="YAML configuration file")
    common.add_argument(
        "--dump-config", action="store_true", default=False, help="print the resolved configuration and exit"
    )
    common.add_argument("--measure", help="YAML measure definition file")
    common.add_argument("--family", choices=("stable", "truncated_stable", "compound_poisson"))
    common.add_argument("--alpha", type=float)
    common.add_argument("--intensity", type=float, help="the intensity K of (truncated) stable families")
    common.add_argument("--trunc", type=float, help="the truncation radius M")
    common.add_argument("--rate", type=float, help="the jump rate of compound Poisson families")
    common.add_argument(
        "--atom", dest="atoms", nargs=2, type=float, action="append", metavar=("RADIUS", "PROB")
    )
    common.add_argument("--drift", type=float, nargs="+")
    common.add_argument("--dim", type=int)
    common.add_argument("--t", type=float)
    common.add_argument("--t-grid", dest="t_grid", type=float, nargs=3, metavar=("START", "STOP", "POINTS"))
    common.add_argument("--linear", dest="t_log", action="store_const", const=False, help="linear t-grid")
    common.add_argument("--c", type=float)
    common.add_argument("--q", type=float)
    common.add_argument("--c-grid", dest="c_grid", type=float, nargs="+")
    common.add_argument("--n", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--epsilon", type=float, help="absolute small-jump cut-off")
    common.add_argument("--eta", type=float, help="small-jump cut-off relative to R")
    common.add_argument("--max-jumps", dest="max_jumps", type=float, help="expected jumps per sample cap")
    common.add_argument("--R", dest="truncation_R", type=float, help="truncation radius of the sampler")
    common.add_argument("--theorems", nargs="+", choices=THEOREM_NAMES)
    common.add_argument("--f", help='"norm", "linear", "linear(u,...)" or "distance_to(p,...)"')
    common.add_argument("--level", type=float, help="confidence level")
    common.add_argument("--self-test", dest="self_test", action="store_const", const=True)
    common.add_argument("--out")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--sample-format", dest="sample_format", choices=SAMPLE_FORMATS)
    common.add_argument("--log-level", dest="log_level")

    parser = argparse.ArgumentParser(
        prog="levybounds",
        description="Median and concentration bounds for Lipschitz functions of Levy processes.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        subparsers.add_parser(command, parents=[common], help=COMMAND_HANDLERS[command].__doc__.split(".")[0])
    return parser


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    config_path = args.pop("config")
    dump = args.pop("dump_config")
    try:
        cfg = resolve_config(args, config_path, environ)
    except ConfigError as error:
        print(f"configuration error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(
        level=cfg.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    if dump:
        sys.stdout.write(cfg.dump())
        return EXIT_OK
    try:
        return COMMAND_HANDLERS[cfg.command](cfg)
    except ConfigError as error:
        print(f"configuration error: {error}", file=sys.stderr)
        return EXIT_CONFIG
    except HypothesisError as error:
        print(f"hypothesis violated: {error}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except LevyBoundsError as error:
        logger.error("%s", error)
        return 1


if __name__ == "__main__":
    sys.exit(main())
