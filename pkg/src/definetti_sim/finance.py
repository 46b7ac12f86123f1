"""The banker gate.

Entrepreneurs each pick one ready uncertain technology by a noisy argmax of
their private animal-spirits value; the banker finances every technology
whose preference count reaches the consent threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .core import RandomSource, as_generator
from .errors import NoCandidates
from .genesis import Lifecycle, UncertainTechnology


@dataclass(frozen=True)
class EntrepreneurPool:
    n: int
    concentration: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"entrepreneur count must be >= 1, got {self.n}")
        if self.concentration < 0:
            raise ValueError(f"concentration must be >= 0, got {self.concentration}")


@dataclass(frozen=True)
class PreferenceTally:
    """Counts per technology, sorted by count descending then id ascending."""

    counts: tuple[tuple[str, int], ...]

    @classmethod
    def from_counts(cls, counts: dict[str, int] | Sequence[tuple[str, int]]) -> PreferenceTally:
        items = counts.items() if isinstance(counts, dict) else counts
        ordered = sorted(((str(k), int(v)) for k, v in items), key=lambda kv: (-kv[1], kv[0]))
        if any(v < 0 for _, v in ordered):
            raise ValueError("preference counts must be non-negative")
        if len({k for k, _ in ordered}) != len(ordered):
            raise ValueError("duplicate technology id in tally")
        return cls(tuple(ordered))

    @property
    def total(self) -> int:
        return sum(v for _, v in self.counts)

    @property
    def ids(self) -> list[str]:
        return [k for k, _ in self.counts]

    @property
    def top(self) -> int:
        return self.counts[0][1] if self.counts else 0


@dataclass(frozen=True)
class BankerPolicy:
    consent_threshold: int

    def __post_init__(self) -> None:
        if self.consent_threshold < 0:
            raise ValueError(f"consent threshold must be >= 0, got {self.consent_threshold}")


@dataclass(frozen=True)
class MutationBatch:
    financed: tuple[str, ...]
    step: int
    technologies: tuple[UncertainTechnology, ...] = ()

    @property
    def mutation_count(self) -> int:
        return len(self.financed)


def choice_probabilities(pool: EntrepreneurPool, candidates: Sequence[UncertainTechnology]) -> np.ndarray:
    """Probability that one entrepreneur picks each candidate: ``softmax(concentration * location)``."""
    signal = pool.concentration * np.array([c.productivity_params.location for c in candidates], dtype=float)
    w = np.exp(signal - signal.max())
    return w / w.sum()


def cast_preferences(
    pool: EntrepreneurPool,
    candidates: Sequence[UncertainTechnology],
    rng: RandomSource,
    method: str = "multinomial",
) -> PreferenceTally:
    """Each entrepreneur picks ``argmax_j(location_j + G_ej / concentration)``.

    ``G`` is i.i.d. standard Gumbel noise, the entrepreneur's private animal
    spirits. By the Gumbel-max identity each pick is a categorical draw with
    probabilities :func:`choice_probabilities`, so the tally is multinomial;
    ``method="multinomial"`` samples it in one draw, ``method="gumbel"``
    simulates every entrepreneur explicitly. The two agree in distribution,
    not draw for draw. A concentration of zero makes all candidates equally
    likely.
    """
    if not candidates:
        raise NoCandidates("no ready uncertain technologies to choose from")
    ids = [c.id for c in candidates]
    if len(candidates) == 1:
        return PreferenceTally.from_counts([(ids[0], pool.n)])
    gen = as_generator(rng)
    if method == "multinomial":
        counts = gen.multinomial(pool.n, choice_probabilities(pool, candidates))
    elif method == "gumbel":
        noise = gen.gumbel(size=(pool.n, len(candidates)))
        if pool.concentration > 0:
            noise += pool.concentration * np.array([c.productivity_params.location for c in candidates])
        counts = np.bincount(np.argmax(noise, axis=1), minlength=len(candidates))
    else:
        raise ValueError(f"unknown method {method!r}")
    return PreferenceTally.from_counts(list(zip(ids, counts.tolist())))


def apply_threshold(tally: PreferenceTally, policy: BankerPolicy, step: int) -> MutationBatch:
    # a count equal to the threshold is financed
    theta = policy.consent_threshold
    return MutationBatch(tuple(k for k, v in tally.counts if v >= theta), step)


def finance_round(
    pool: EntrepreneurPool,
    candidates: Sequence[UncertainTechnology],
    policy: BankerPolicy,
    step: int,
    rng: RandomSource,
    preferences: Callable[..., PreferenceTally] | None = None,
) -> tuple[MutationBatch, PreferenceTally | None]:
    """One financing round; returns the batch and the tally it came from.

    Financed technologies are returned inside the batch with their lifecycle
    moved to ``financed``. With no candidates nothing is drawn and the tally
    is ``None``. ``preferences`` substitutes for :func:`cast_preferences`.
    """
    if not candidates:
        return MutationBatch((), step), None
    tally = (preferences or cast_preferences)(pool, candidates, rng)
    batch = apply_threshold(tally, policy, step)
    by_id = {c.id: c for c in candidates}
    techs = tuple(replace(by_id[k], state=Lifecycle.FINANCED) for k in batch.financed)
    return MutationBatch(batch.financed, step, techs), tally
