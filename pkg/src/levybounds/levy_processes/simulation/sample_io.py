"""
This module dumps and reloads raw samples.

The binary layout is little-endian float64, row-major with shape (n, d), next to a
JSON sidecar named <file>.json holding the batch metadata:

    {"format": "levybounds-samples", "version": 1, "dtype": "<f8", "order": "C",
     "shape": [n, d], ...SampleBatch.metadata()}

The CSV alternative has a header x0, ..., x{d-1} and one row per sample, each value
written as the shortest decimal string that round-trips the binary64.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np

from ...exceptions import SamplingError
from .samplers import SampleBatch

logger = logging.getLogger(__name__)

SAMPLE_FORMAT = "levybounds-samples"
SAMPLE_FORMAT_VERSION = 1
SAMPLE_DTYPE = "<f8"
# CSV dumps beyond this many rows are refused
CSV_MAX_ROWS = 100_000


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_binary(batch: SampleBatch, path) -> Path:
    """Writes the values of a batch as raw little-endian float64 plus a JSON sidecar.

    Returns:
        Path: the sidecar path.
    """
    path = Path(path)
    np.ascontiguousarray(batch.values, dtype=SAMPLE_DTYPE).tofile(path)
    header = {
        "format": SAMPLE_FORMAT,
        "version": SAMPLE_FORMAT_VERSION,
        "dtype": SAMPLE_DTYPE,
        "order": "C",
        "shape": [batch.n, batch.dimension],
        **batch.metadata(),
    }
    sidecar = sidecar_path(path)
    sidecar.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.debug("wrote %d x %d samples to %s", batch.n, batch.dimension, path)
    return sidecar


def read_binary(path) -> tuple[np.ndarray, dict]:
    """Reads back a binary dump and its sidecar.

    Raises:
        SamplingError: when the file does not match its sidecar.
    """
    path = Path(path)
    header = json.loads(sidecar_path(path).read_text(encoding="utf-8"))
    if header.get("format") != SAMPLE_FORMAT:
        raise SamplingError(f"{path} is not a sample dump")
    values = np.fromfile(path, dtype=header["dtype"])
    shape = tuple(header["shape"])
    if values.size != shape[0] * shape[1]:
        raise SamplingError(f"{path} holds {values.size} values, the sidecar announces {shape}")
    return values.reshape(shape), header


def write_csv(batch: SampleBatch, path) -> None:
    """Writes the values of a small batch as CSV."""
    if batch.n > CSV_MAX_ROWS:
        raise ValueError(f"CSV dumps are limited to {CSV_MAX_ROWS} rows, use the binary format")
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([f"x{k}" for k in range(batch.dimension)])
        for row in batch.values:
            writer.writerow([repr(float(value)) for value in row])


def read_csv(path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    return np.array([[float(value) for value in row] for row in rows[1:]], dtype=float).reshape(
        len(rows) - 1, len(rows[0])
    )


def write_samples(batch: SampleBatch, path, fmt: str = "binary") -> None:
    if fmt == "binary":
        write_binary(batch, path)
    elif fmt == "csv":
        write_csv(batch, path)
    else:
        raise ValueError(f"unknown sample format {fmt!r}, expected 'binary' or 'csv'")
