"""Idea arrival and R&D: the stage that produces "uncertain" technologies."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .core import RandomSource, as_generator
from .errors import DelayInvalid


class Lifecycle(str, enum.Enum):
    UNCERTAIN = "uncertain"
    FINANCED = "financed"
    CANDIDATE = "certain-candidate"
    CERTAIN = "certain"
    DISCARDED = "discarded"


class ProductivityParams(NamedTuple):
    """Log-normal latent productivity: ``exp(location + spread * z)``."""

    location: float
    spread: float


@dataclass(frozen=True)
class Idea:
    id: str
    conception_step: int
    region: str


@dataclass(frozen=True)
class UncertainTechnology:
    id: str
    source_idea: str
    conception_step: int
    ex_ante_success_prob: float
    productivity_params: ProductivityParams
    readiness_step: int
    region: str
    state: Lifecycle = Lifecycle.UNCERTAIN
    rd_cost: float = 0.0


def idea_id(region: str, step: int, k: int) -> str:
    return f"{region}-{step:06d}-{k:03d}"


def sample_idea_arrivals(rate: float, region: str, step: int, rng: RandomSource) -> list[Idea]:
    """Poisson number of ideas for one region and step."""
    if rate < 0:
        raise ValueError(f"idea rate must be >= 0, got {rate}")
    if rate == 0:
        return []
    k = int(as_generator(rng).poisson(rate))
    return [Idea(idea_id(region, step, i), step, region) for i in range(k)]


def develop(
    idea: Idea,
    rd_delay: int,
    ex_ante_p: float,
    productivity_params: ProductivityParams,
    rng: RandomSource,
    rd_cost: float = 0.0,
) -> UncertainTechnology:
    """Run R&D on ``idea``.

    ``productivity_params.location`` is the log of the regional frontier at
    conception. The lab's outcome shifts it upward by a half-normal amount
    ``spread * |z|``; that shifted location is what entrepreneurs later see
    and what the ex-post productivity draw is centred on.
    """
    if rd_delay < 1:
        raise DelayInvalid(f"rd_delay must be >= 1, got {rd_delay}")
    if not 0.0 <= ex_ante_p <= 1.0:
        raise ValueError(f"ex_ante_p must be in [0, 1], got {ex_ante_p}")
    base, spread = productivity_params
    z = as_generator(rng).standard_normal()
    params = ProductivityParams(base + spread * abs(z), spread)
    return UncertainTechnology(
        id=idea.id,
        source_idea=idea.id,
        conception_step=idea.conception_step,
        ex_ante_success_prob=ex_ante_p,
        productivity_params=params,
        readiness_step=idea.conception_step + rd_delay,
        region=idea.region,
        rd_cost=rd_cost,
    )


def ready_pool(all_uncertain: Iterable[UncertainTechnology], step: int) -> list[UncertainTechnology]:
    return [
        tech
        for tech in all_uncertain
        if tech.readiness_step <= step and tech.state is Lifecycle.UNCERTAIN
    ]
