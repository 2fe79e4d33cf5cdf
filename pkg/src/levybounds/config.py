"""
This module defines RunConfig, the resolved configuration of a command-line run.

A RunConfig is layered, lowest to highest precedence, from the dataclass defaults,
a YAML file (--config), environment variables LEVYBOUNDS_<FIELD> (e.g.
LEVYBOUNDS_SEED, LEVYBOUNDS_WORKERS, LEVYBOUNDS_N, LEVYBOUNDS_LOG_LEVEL) and the
command-line flags. Lists in environment variables are comma separated.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import yaml

from .exceptions import ConfigError
from .levy_processes.measure_files import family_from_dict, load_family
from .levy_processes.simulation.samplers import DEFAULT_ETA, DEFAULT_TRUNCATION, EpsilonPolicy

logger = logging.getLogger(__name__)

ENV_PREFIX = "LEVYBOUNDS_"
COMMANDS = ("bounds", "sweep", "simulate", "verify")
FORMATS = ("csv", "json")
SAMPLE_FORMATS = ("binary", "csv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
THEOREM_NAMES = ("thm1", "thm2", "thm3", "MR")


@dataclass
class RunConfig:
    """Everything a command-line run needs.

    The family is given either by a measure definition file (measure) or inline by
    family and its parameters. Times are t, or a grid t_grid = [start, stop, points],
    log-spaced unless t_log is false.
    """

    # pylint: disable=too-many-instance-attributes

    command: str = "bounds"
    measure: str | None = None
    family: str | None = None
    alpha: float | None = None
    intensity: float | None = None
    trunc: float | None = None
    rate: float | None = None
    atoms: list[list[float]] | None = None
    drift: list[float] | None = None
    dim: int | None = None
    t: float | None = None
    t_grid: list[float] | None = None
    t_log: bool = True
    c: float | None = None
    q: float | None = None
    c_grid: list[float] | None = None
    n: int = 100_000
    seed: int = 0
    workers: int = 1
    epsilon: float | None = None
    eta: float = DEFAULT_ETA
    max_jumps: float | None = 1000.0
    truncation_R: float = DEFAULT_TRUNCATION
    theorems: list[str] = field(default_factory=lambda: list(THEOREM_NAMES))
    f: str = "norm"
    level: float = 0.99
    self_test: bool = False
    out: str | None = None
    format: str = "csv"
    sample_format: str = "binary"
    log_level: str = "WARNING"

    def validate(self) -> RunConfig:
        """Checks the invariants of a configuration.

        Raises:
            ConfigError: on any inconsistent or out-of-range value.
        """
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}, expected one of {COMMANDS}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}, expected one of {FORMATS}")
        if self.sample_format not in SAMPLE_FORMATS:
            raise ConfigError(f"unknown sample format {self.sample_format!r}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigError(f"unknown log level {self.log_level!r}")
        if self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        if self.seed < 0:
            raise ConfigError(f"the seed must be nonnegative, got {self.seed}")
        if not 0 < self.level < 1:
            raise ConfigError(f"the confidence level must lie in (0, 1), got {self.level}")
        if self.measure is not None and self.family is not None:
            raise ConfigError("give either a measure file or an inline family, not both")
        if self.c is not None and self.q is not None:
            raise ConfigError("give either c or q, not both")
        if self.c is not None and not self.c > 0:
            raise ConfigError(f"c must be positive, got {self.c}")
        if self.q is not None and not 0 < self.q <= 1:
            raise ConfigError(f"q must lie in (0, 1], got {self.q}")
        if self.t is not None and self.t_grid is not None:
            raise ConfigError("give either t or a t-grid, not both")
        if self.t_grid is not None:
            if len(self.t_grid) != 3 or int(self.t_grid[2]) != self.t_grid[2] or self.t_grid[2] < 1:
                raise ConfigError(f"the t-grid is [start, stop, points], got {self.t_grid}")
            if not 0 < self.t_grid[0] <= self.t_grid[1]:
                raise ConfigError(f"the t-grid needs 0 < start <= stop, got {self.t_grid}")
        if self.t is not None and not self.t > 0:
            raise ConfigError(f"t must be positive, got {self.t}")
        if self.command != "verify" and not self.has_family():
            raise ConfigError(f"the {self.command} command needs --measure or --family")
        if self.has_family() and self.t is None and self.t_grid is None:
            raise ConfigError(f"the {self.command} command needs --t or --t-grid")
        if self.command == "simulate" and self.out is None:
            raise ConfigError("the simulate command needs --out")
        unknown = set(self.theorems) - set(THEOREM_NAMES)
        if unknown or not self.theorems:
            raise ConfigError(f"theorems must be a nonempty subset of {THEOREM_NAMES}")
        if self.c_grid is not None and (not self.c_grid or min(self.c_grid) <= 0):
            raise ConfigError("the c-grid must be a nonempty list of positive values")
        try:
            self.epsilon_policy()
        except ValueError as error:
            raise ConfigError(str(error)) from error
        return self

    def times(self) -> list[float]:
        if self.t is not None:
            return [self.t]
        if self.t_grid is None:
            return []
        start, stop, points = self.t_grid
        if self.t_log:
            grid = np.geomspace(start, stop, int(points))
        else:
            grid = np.linspace(start, stop, int(points))
        return [float(value) for value in grid]

    def epsilon_policy(self) -> EpsilonPolicy:
        return EpsilonPolicy(eta=self.eta, epsilon=self.epsilon, max_jumps_per_sample=self.max_jumps)

    def has_family(self) -> bool:
        return self.measure is not None or self.family is not None

    def build_family(self):
        """Builds the family from the measure file or the inline parameters."""
        if self.measure is not None:
            return load_family(self.measure)
        if self.family is None:
            raise ConfigError("no family was configured")
        inline = {
            "family": self.family,
            "alpha": self.alpha,
            "intensity": self.intensity,
            "truncation": self.trunc,
            "rate": self.rate,
            "atoms": self.atoms,
            "drift": self.drift,
            "dimension": self.dim,
        }
        data = {key: value for key, value in inline.items() if value is not None}
        if self.family == "compound_poisson" and "atoms" not in data:
            data["atoms"] = [[1.0, 1.0]]
        return family_from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict | None) -> RunConfig:
        """Builds a RunConfig over the defaults; unknown keys are an error."""
        data = data or {}
        if not isinstance(data, dict):
            raise ConfigError(f"a configuration must be a mapping, got {type(data).__name__}")
        known = {spec.name for spec in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys {sorted(unknown)}")
        return replace(cls(), **{key: _coerce(key, value) for key, value in data.items()})

    def dump(self) -> str:
        """The configuration as YAML; parse_config(dump()) reproduces it."""
        return yaml.safe_dump(self.to_dict(), sort_keys=True)


# field name -> kind, used to convert YAML and environment values
FIELD_KINDS = {
    "command": "str",
    "measure": "str",
    "family": "str",
    "alpha": "float",
    "intensity": "float",
    "trunc": "float",
    "rate": "float",
    "atoms": "pairs",
    "drift": "floats",
    "dim": "int",
    "t": "float",
    "t_grid": "floats",
    "t_log": "bool",
    "c": "float",
    "q": "float",
    "c_grid": "floats",
    "n": "int",
    "seed": "int",
    "workers": "int",
    "epsilon": "float",
    "eta": "float",
    "max_jumps": "float",
    "truncation_R": "float",
    "theorems": "strs",
    "f": "str",
    "level": "float",
    "self_test": "bool",
    "out": "str",
    "format": "str",
    "sample_format": "str",
    "log_level": "str",
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce(key: str, value):
    """Converts a YAML or environment value to the type of the field."""
    if value is None:
        return None
    kind = FIELD_KINDS[key]
    try:
        if kind == "str":
            return str(value)
        if kind == "int":
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"{value!r} is not an integer")
            return int(value)
        if kind == "float":
            result = float(value)
            if math.isnan(result):
                raise ValueError("nan is not allowed")
            return result
        if kind == "bool":
            if isinstance(value, bool):
                return value
            text = str(value).strip().lower()
            if text in _TRUE:
                return True
            if text in _FALSE:
                return False
            raise ValueError(f"{value!r} is not a boolean")
        if kind == "floats":
            items = value.split(",") if isinstance(value, str) else value
            return [float(item) for item in items]
        if kind == "strs":
            items = value.split(",") if isinstance(value, str) else value
            return [str(item).strip() for item in items]
        # pairs, written "r:p,r:p" in the environment
        if isinstance(value, str):
            return [[float(part) for part in pair.split(":")] for pair in value.split(",")]
        return [[float(part) for part in pair] for pair in value]
    except (TypeError, ValueError) as error:
        raise ConfigError(f"invalid value for {key}: {value!r} ({error})") from error


def parse_config(text: str) -> RunConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as error:
        raise ConfigError(f"the configuration is not valid YAML: {error}") from error
    return RunConfig.from_dict(data)


def load_config_file(path) -> dict:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as error:
        raise ConfigError(f"cannot read the configuration file {path}: {error}") from error
    except yaml.YAMLError as error:
        raise ConfigError(f"{path} is not valid YAML: {error}") from error
    if data is not None and not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a mapping")
    return data or {}


def environment_overrides(environ=None) -> dict:
    """The configuration values set through LEVYBOUNDS_<FIELD> environment variables."""
    environ = os.environ if environ is None else environ
    overrides = {}
    for name in FIELD_KINDS:
        key = ENV_PREFIX + name.upper()
        if key in environ:
            overrides[name] = _coerce(name, environ[key])
    return overrides


def resolve_config(flags: dict, config_path=None, environ=None) -> RunConfig:
    """Layers defaults, the YAML file, the environment and the flags, then validates.

    Args:
        flags (dict): values given on the command line; None means unset.
        config_path (str): an optional YAML configuration file.
        environ (dict): the environment, os.environ by default.

    Returns:
        RunConfig: the validated configuration.
    """
    layered = {}
    if config_path is not None:
        layered.update(load_config_file(config_path))
    layered.update(environment_overrides(environ))
    layered.update({key: value for key, value in flags.items() if value is not None})
    config = RunConfig.from_dict(layered)
    logger.debug("resolved configuration: %r", config)
    return config.validate()
