"""Market entry, survival of the fittest, replicator drift and diffusion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .core import RandomSource, as_generator
from .errors import NonPositiveProductivity, NotFinanced, RegionMismatch, TraceTooShort
from .genesis import Lifecycle, UncertainTechnology

DEFAULT_ENTRY_SHARE = 0.05
DEFAULT_ETA = 0.5
DEFAULT_EXTINCTION_FLOOR = 1e-3
DEFAULT_EX_POST_SPREAD = 0.05


@dataclass(frozen=True, slots=True)
class CertainTechnology:
    id: str
    productivity: float
    ex_post_profit_rate: float
    adoption_share: float
    region: str
    born_step: int
    state: Lifecycle = Lifecycle.CERTAIN

    def with_share(self, share: float) -> CertainTechnology:
        # positional construction; dataclasses.replace is the engine's hot spot
        return CertainTechnology(
            self.id, self.productivity, self.ex_post_profit_rate, share, self.region, self.born_step, self.state
        )


def _weighted_mean(values: Sequence[float], weights: Sequence[float]) -> float:
    return math.fsum(v * w for v, w in zip(values, weights))


@dataclass(frozen=True)
class MarketState:
    """Technologies in use in one region.

    Build through :meth:`of`, which renormalises nothing and recomputes the
    share-weighted average profit rate from the technologies given.
    """

    region: str
    technologies: tuple[CertainTechnology, ...]
    average_profit_rate: float = field(default=math.nan)

    @classmethod
    def of(cls, region: str, technologies: Sequence[CertainTechnology]) -> MarketState:
        techs = tuple(technologies)
        if not techs:
            raise ValueError(f"market {region!r} must hold at least one technology")
        avg = _weighted_mean([t.ex_post_profit_rate for t in techs], [t.adoption_share for t in techs])
        return cls(region, techs, avg)

    @classmethod
    def initial(cls, region: str, productivity: float, profit_rate: float) -> MarketState:
        incumbent = CertainTechnology(f"{region}-incumbent", productivity, profit_rate, 1.0, region, 0)
        return cls.of(region, [incumbent])

    @property
    def shares(self) -> np.ndarray:
        return np.array([t.adoption_share for t in self.technologies])

    @property
    def productivity(self) -> float:
        """Share-weighted productivity of the region."""
        return _weighted_mean([t.productivity for t in self.technologies], self.shares)

    @property
    def best(self) -> CertainTechnology:
        return max(self.technologies, key=lambda t: (t.productivity, t.id))

    def ids(self) -> set[str]:
        return {t.id for t in self.technologies}

    def scaled_productivity(self, factor: float) -> MarketState:
        techs = [replace(t, productivity=t.productivity * factor) for t in self.technologies]
        return MarketState.of(self.region, techs)


@dataclass(frozen=True)
class RegionGraph:
    regions: tuple[str, ...]
    links: tuple[tuple[str, str, float], ...] = ()

    def __post_init__(self) -> None:
        known = set(self.regions)
        if len(known) != len(self.regions):
            raise ValueError("region ids must be unique")
        for src, dst, w in self.links:
            if src not in known or dst not in known:
                raise ValueError(f"edge {src}->{dst} references an undeclared region")
            if src == dst:
                raise ValueError(f"self-link on region {src!r}")
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"edge {src}->{dst} weight {w} outside [0, 1]")

    def inbound(self, region: str) -> list[tuple[str, float]]:
        return [(src, w) for src, dst, w in self.links if dst == region]


def _draw_ex_post_rate(average: float, ex_ante_p: float, spread: float, gen: np.random.Generator) -> float:
    beats = gen.random() < ex_ante_p
    magnitude = abs(spread * gen.standard_normal())
    if beats:
        return max(average + magnitude, math.nextafter(average, math.inf))
    return min(average - magnitude, math.nextafter(average, -math.inf))


def realize_ex_post(
    tech: UncertainTechnology,
    market: MarketState,
    ex_ante_p: float,
    rng: RandomSource,
    spread: float = DEFAULT_EX_POST_SPREAD,
    step: int | None = None,
) -> CertainTechnology:
    """Put a financed technology into production and measure its returns.

    The realised profit rate lies strictly above the market average with
    probability ``ex_ante_p`` and strictly below otherwise, at distance
    ``|spread * z|``. Productivity is log-normal around the R&D estimate.
    """
    if tech.state is not Lifecycle.FINANCED:
        raise NotFinanced(f"technology {tech.id} is {tech.state.value}, not financed")
    gen = as_generator(rng)
    rate = _draw_ex_post_rate(market.average_profit_rate, ex_ante_p, spread, gen)
    location, pspread = tech.productivity_params
    productivity = math.exp(location + pspread * gen.standard_normal())
    return CertainTechnology(
        id=tech.id,
        productivity=productivity,
        ex_post_profit_rate=rate,
        adoption_share=0.0,
        region=market.region,
        born_step=tech.readiness_step if step is None else step,
        state=Lifecycle.CANDIDATE,
    )


def partition_candidates(
    market: MarketState, candidates: Sequence[CertainTechnology]
) -> tuple[list[CertainTechnology], list[CertainTechnology]]:
    """Split candidates into (entrants, discarded) against the current average.

    Candidates already present in the market (by id) are dropped silently.
    """
    for c in candidates:
        if c.region != market.region:
            raise RegionMismatch(f"candidate {c.id} is for {c.region!r}, market is {market.region!r}")
    present = market.ids()
    entrants, discarded = [], []
    for c in sorted(candidates, key=lambda t: t.id):
        if c.id in present:
            continue
        if c.ex_post_profit_rate > market.average_profit_rate:
            entrants.append(c)
        else:
            discarded.append(replace(c, state=Lifecycle.DISCARDED))
    return entrants, discarded


def select_fittest(
    market: MarketState,
    candidates: Sequence[CertainTechnology],
    entry_share: float = DEFAULT_ENTRY_SHARE,
) -> MarketState:
    """Admit candidates that beat the average profit rate.

    Entrants are admitted one at a time in id order, each taking
    ``entry_share`` while everything already present is scaled by
    ``1 - entry_share``. If nobody passes, ``market`` itself is returned.
    """
    if not 0.0 < entry_share < 1.0:
        raise ValueError(f"entry_share must be in (0, 1), got {entry_share}")
    entrants, _ = partition_candidates(market, candidates)
    if not entrants:
        return market
    # closed form of admitting entrants one by one: entrant j of m keeps
    # (1 - e)^(m - 1 - j) of its entry share, incumbents keep (1 - e)^m
    keep = 1.0 - entry_share
    m = len(entrants)
    techs = [t.with_share(t.adoption_share * keep**m) for t in market.technologies]
    techs.extend(
        CertainTechnology(c.id, c.productivity, c.ex_post_profit_rate, entry_share * keep ** (m - 1 - j),
                          market.region, c.born_step, Lifecycle.CERTAIN)
        for j, c in enumerate(entrants)
    )
    return MarketState.of(market.region, _normalised(techs))


def _normalised(techs: list[CertainTechnology]) -> list[CertainTechnology]:
    total = math.fsum(t.adoption_share for t in techs)
    return [t.with_share(t.adoption_share / total) for t in techs]


def replicator_step(
    market: MarketState,
    eta: float = DEFAULT_ETA,
    extinction_floor: float = DEFAULT_EXTINCTION_FLOOR,
) -> MarketState:
    """Discrete replicator update of adoption shares by relative profit rate.

    Shares that fall below ``extinction_floor`` are removed, except that the
    largest share always survives so the market never empties.
    """
    techs = market.technologies
    if len(techs) == 1:
        return market
    avg = market.average_profit_rate
    raw = [max(0.0, t.adoption_share * (1.0 + eta * (t.ex_post_profit_rate - avg))) for t in techs]
    total = math.fsum(raw)
    if total <= 0.0:
        return market
    shares = [r / total for r in raw]
    keep_idx = max(range(len(techs)), key=lambda i: shares[i])
    kept = [
        t.with_share(s)
        for i, (t, s) in enumerate(zip(techs, shares))
        if s >= extinction_floor or i == keep_idx
    ]
    return MarketState.of(market.region, _normalised(kept))


def diffuse(
    markets: Mapping[str, MarketState],
    graph: RegionGraph,
    rng: RandomSource,
    ex_ante_p: float,
    spread: float = DEFAULT_EX_POST_SPREAD,
    step: int = 0,
) -> dict[str, list[CertainTechnology]]:
    """Copy best-practice technologies along the region graph.

    Reads ``markets`` as a frozen snapshot and returns, per destination
    region, the candidates that arrive this step; they face that region's
    selection on the next step. Productivity is copied, the ex-post profit
    rate is redrawn against the destination's average. A technology the
    destination already runs is not sent again.
    """
    gen = as_generator(rng)
    arrivals: dict[str, list[CertainTechnology]] = {r: [] for r in graph.regions}
    for region in graph.regions:
        if region not in markets:
            raise KeyError(f"no market for region {region!r}")
    for src, dst, w in graph.links:
        if w <= 0.0:
            continue
        if w < 1.0 and gen.random() >= w:
            continue
        best = markets[src].best
        target = markets[dst]
        if best.id in target.ids() or any(c.id == best.id for c in arrivals[dst]):
            continue
        rate = _draw_ex_post_rate(target.average_profit_rate, ex_ante_p, spread, gen)
        arrivals[dst].append(
            CertainTechnology(best.id, best.productivity, rate, 0.0, dst, step, Lifecycle.CANDIDATE)
        )
    return arrivals


def pace_of_evolution(history: Sequence[float]) -> float:
    """Mean log-growth per step of a productivity trace."""
    if len(history) < 2:
        raise TraceTooShort(f"need at least 2 points, got {len(history)}")
    if any(not p > 0 for p in history):
        raise NonPositiveProductivity("productivity trace must be strictly positive")
    return (math.log(history[-1]) - math.log(history[0])) / (len(history) - 1)
