"""
This module reads and writes measure definition files.

A measure definition is a YAML mapping. Keys and their meaning:

    family:          stable | truncated_stable | compound_poisson      (required)
    alpha:           the index, in (0, 2)               stable, truncated_stable
    intensity:       the intensity K > 0, default 1     stable, truncated_stable
    truncation:      the truncation radius M > 0        truncated_stable
    dimension:       d, default 1                       stable, compound_poisson
    drift:           [b_1, ..., b_d], default 0         stable, compound_poisson
    weights:         [w_minus, w_plus], d = 1           stable
    spherical_mass:  sigma(S^{d-1}), d > 1              stable
    rate:            the jump rate lambda > 0           compound_poisson
    atoms:           [[radius, probability], ...]       compound_poisson
    jump_law:        {name: <scipy.stats law>, params: {...}}   compound_poisson
    positive_fraction: P(upward jump), default 0.5, d = 1       compound_poisson

Exactly one of atoms and jump_law is required for compound Poisson families.
For example:

    family: truncated_stable
    alpha: 1.0
    intensity: 1.0
    truncation: 1.0
"""

from __future__ import annotations

import logging
from pathlib import Path

import yaml

from ..exceptions import ConfigError
from .common_families.compound_poisson import CompoundPoissonFamily
from .common_families.stable import StableFamily
from .common_families.truncated_stable import TruncatedStableFamily

logger = logging.getLogger(__name__)

FAMILY_KEYS = {
    "stable": {"family", "alpha", "intensity", "dimension", "drift", "weights", "spherical_mass"},
    "truncated_stable": {"family", "alpha", "intensity", "truncation"},
    "compound_poisson": {
        "family",
        "rate",
        "atoms",
        "jump_law",
        "dimension",
        "drift",
        "positive_fraction",
    },
}
REQUIRED_KEYS = {
    "stable": {"alpha"},
    "truncated_stable": {"alpha", "truncation"},
    "compound_poisson": {"rate"},
}


def _float_list(value, key: str) -> list[float]:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{key} must be a list of numbers, got {value!r}")
    try:
        return [float(entry) for entry in value]
    except (TypeError, ValueError) as error:
        raise ConfigError(f"{key} must be a list of numbers, got {value!r}") from error


def family_from_dict(data: dict):
    """Builds a family from a measure definition mapping.

    Raises:
        ConfigError: on unknown families or keys, missing keys, or invalid values.
    """
    if not isinstance(data, dict):
        raise ConfigError(f"a measure definition must be a mapping, got {type(data).__name__}")
    family = data.get("family")
    if family not in FAMILY_KEYS:
        raise ConfigError(f"unknown family {family!r}, expected one of {sorted(FAMILY_KEYS)}")
    unknown = set(data) - FAMILY_KEYS[family]
    if unknown:
        raise ConfigError(f"keys {sorted(unknown)} do not apply to the {family} family")
    missing = REQUIRED_KEYS[family] - set(data)
    if missing:
        raise ConfigError(f"the {family} family needs {sorted(missing)}")

    drift = _float_list(data["drift"], "drift") if data.get("drift") is not None else None
    try:
        if family == "stable":
            weights = data.get("weights")
            result = StableFamily(
                float(data["alpha"]),
                float(data.get("intensity", 1.0)),
                dimension=int(data.get("dimension", 1)),
                weights=None if weights is None else tuple(_float_list(weights, "weights")),
                spherical_mass=data.get("spherical_mass"),
                drift=drift,
            )
        elif family == "truncated_stable":
            result = TruncatedStableFamily(
                float(data["alpha"]), float(data.get("intensity", 1.0)), float(data["truncation"])
            )
        else:
            jump_law = data.get("jump_law")
            if jump_law is not None and not (isinstance(jump_law, dict) and "name" in jump_law):
                raise ConfigError(f"jump_law must be a mapping with a name, got {jump_law!r}")
            atoms = data.get("atoms")
            result = CompoundPoissonFamily(
                float(data["rate"]),
                atoms=None if atoms is None else [_float_list(atom, "atoms") for atom in atoms],
                jump_law=None if jump_law is None else jump_law["name"],
                jump_params=None if jump_law is None else dict(jump_law.get("params") or {}),
                dimension=int(data.get("dimension", 1)),
                drift=drift,
                positive_fraction=float(data.get("positive_fraction", 0.5)),
            )
        result.measure.validate()
    except ConfigError:
        raise
    except (TypeError, ValueError) as error:
        raise ConfigError(f"invalid {family} definition: {error}") from error
    return result


def family_to_dict(family) -> dict:
    """The measure definition mapping of a family; family_from_dict inverts it."""
    if isinstance(family, TruncatedStableFamily):
        return {
            "family": "truncated_stable",
            "alpha": family.alpha,
            "intensity": family.intensity_K,
            "truncation": family.truncation_M,
        }
    if isinstance(family, StableFamily):
        data = {
            "family": "stable",
            "alpha": family.alpha,
            "intensity": family.intensity_K,
            "dimension": family.dimension,
        }
        if family.dimension == 1:
            data["weights"] = list(family.weights)
        else:
            data["spherical_mass"] = family.spherical_mass
    elif isinstance(family, CompoundPoissonFamily):
        data = {"family": "compound_poisson", "rate": family.rate, "dimension": family.dimension}
        jumps = family.radial.describe()
        if jumps["kind"] == "atoms":
            data["atoms"] = jumps["atoms"]
        else:
            data["jump_law"] = {"name": jumps["name"], "params": dict(jumps["params"])}
        if family.dimension == 1:
            data["positive_fraction"] = family.positive_fraction
    else:
        raise TypeError(f"{family!r} has no measure definition")
    if family.drift is not None:
        data["drift"] = [float(value) for value in family.measure.drift]
    return data


def load_family(path):
    """Reads a family from a YAML measure definition file."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as error:
        raise ConfigError(f"cannot read the measure file {path}: {error}") from error
    except yaml.YAMLError as error:
        raise ConfigError(f"{path} is not valid YAML: {error}") from error
    logger.debug("loaded measure definition %s: %r", path, data)
    return family_from_dict(data)


def dump_family(family) -> str:
    return yaml.safe_dump(family_to_dict(family), sort_keys=False)
