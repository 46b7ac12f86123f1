"""Simulation clock and splittable random streams.

Every run has a finite horizon fixed at construction; there is no
run-to-convergence mode. All randomness flows through :class:`RngStream`
values, which are addressed by ``(seed, path)`` so that any stream can be
rebuilt independently of the order in which others were derived.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import HorizonExceeded, HorizonInvalid, LabelEmpty

UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class SimulationClock:
    t: int
    horizon: int

    def __post_init__(self) -> None:
        if not isinstance(self.horizon, int) or self.horizon < 1:
            raise HorizonInvalid(f"horizon must be a positive integer, got {self.horizon!r}")
        if not 0 <= self.t <= self.horizon:
            raise HorizonExceeded(f"t={self.t} outside [0, {self.horizon}]")

    @property
    def done(self) -> bool:
        return self.t == self.horizon


def new_clock(horizon: int | None) -> SimulationClock:
    """Return a clock at ``t = 0``.

    ``None`` or infinity (an unbounded, steady-state request) is rejected the
    same way as a non-positive horizon.
    """
    if horizon is None or isinstance(horizon, bool) or not isinstance(horizon, (int, np.integer)):
        raise HorizonInvalid(f"horizon must be a finite positive integer, got {horizon!r}")
    if horizon < 1:
        raise HorizonInvalid(f"horizon must be >= 1, got {horizon}")
    return SimulationClock(0, int(horizon))


def advance(clock: SimulationClock) -> SimulationClock:
    if clock.t >= clock.horizon:
        raise HorizonExceeded(
            f"clock already at horizon {clock.horizon}; start a new run with a longer horizon"
        )
    return SimulationClock(clock.t + 1, clock.horizon)


def _label_key(label: str) -> int:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class RngStream:
    """Immutable address of a random stream.

    The bit generator is Philox (counter-based) keyed through a
    ``SeedSequence`` whose spawn key is the hashed label path, so a stream
    depends only on ``(seed, path)``.
    """

    seed: int
    path: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= UINT64_MAX:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(self.seed, spawn_key=tuple(_label_key(p) for p in self.path))
        return np.random.Generator(np.random.Philox(ss))

    def derive(self, label: str) -> RngStream:
        return derive_stream(self, label)


def root_stream(seed: int) -> RngStream:
    return RngStream(int(seed), ())


def derive_stream(parent: RngStream, label: str) -> RngStream:
    if not label:
        raise LabelEmpty("stream label must be non-empty")
    return RngStream(parent.seed, parent.path + (str(label),))


RandomSource = Union[RngStream, np.random.Generator]


def as_generator(rng: RandomSource) -> np.random.Generator:
    """Accept a stream address (replayed from its start) or a live generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")
