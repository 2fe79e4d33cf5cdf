"""Reproducible random streams.

A stream is identified by (seed, stream, substream). Its generator is a counter-based
Philox keyed by numpy's SeedSequence with spawn_key = (stream, *substream), so that
the bytes drawn depend only on the identifier, never on which worker draws them or
in which order streams are consumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ALGORITHM = "philox4x64-10/seedsequence"


@dataclass(frozen=True)
class RngStreamSpec:
    """The identifier of a random stream.

    Args:
        seed (int): the master seed, a nonnegative integer (64 bits in practice).
        stream (int): the stream index, typically a verification job.
        substream (tuple[int, ...]): the path of substreams below the stream.
    """

    seed: int
    stream: int = 0
    substream: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.seed < 0 or self.stream < 0 or any(index < 0 for index in self.substream):
            raise ValueError("seeds and stream indices must be nonnegative")

    def substream_of(self, index: int) -> RngStreamSpec:
        """The child stream with the given index."""
        return RngStreamSpec(self.seed, self.stream, (*self.substream, int(index)))

    def with_stream(self, stream: int) -> RngStreamSpec:
        return RngStreamSpec(self.seed, int(stream), ())

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.seed, spawn_key=(self.stream, *self.substream))

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of the stream."""
        return np.random.Generator(np.random.Philox(self.seed_sequence()))

    def describe(self) -> dict:
        return {
            "seed": self.seed,
            "stream": self.stream,
            "substream": list(self.substream),
            "algorithm": ALGORITHM,
        }
