"""Run engine, replications and the consent-threshold sweep."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import stats

from .core import RngStream, advance, new_clock, root_stream
from .demographics import PopulationState, regional_step
from .errors import SimulationError, ThetaListInvalid
from .finance import BankerPolicy, EntrepreneurPool, PreferenceTally, cast_preferences, finance_round
from .genesis import Idea, ProductivityParams, UncertainTechnology, develop, ready_pool, sample_idea_arrivals
from .scenario import ScenarioConfig
from .selection import (
    CertainTechnology,
    MarketState,
    RegionGraph,
    diffuse,
    pace_of_evolution,
    realize_ex_post,
    replicator_step,
    select_fittest,
)

ArrivalsFn = Callable[[float, str, int, np.random.Generator], "list[Idea]"]
PreferencesFn = Callable[[EntrepreneurPool, "list[UncertainTechnology]", np.random.Generator], PreferenceTally]


@dataclass(frozen=True)
class EngineHooks:
    """Replaceable stages for test harnesses. Must be picklable to use workers."""

    arrivals: ArrivalsFn = sample_idea_arrivals
    preferences: PreferencesFn = cast_preferences
    # called as observe(stage, step, market) after "select", "replicator" and "diffuse"
    observe: Callable[[str, int, MarketState], None] | None = None


DEFAULT_HOOKS = EngineHooks()


@dataclass(frozen=True)
class StepRecord:
    step: int
    region: str
    mutations: int
    productivity: float
    avg_profit_rate: float
    population: float
    candidates: int
    top_count: int
    entrants: int
    technologies: int


@dataclass(frozen=True)
class RegionSummary:
    region: str
    pace: float
    total_mutations: int
    final_population: float
    rd_spend: float


def summarise(
    regions: Sequence[str],
    initial_productivity: Sequence[float],
    records: Sequence[StepRecord],
    rd_spend: Sequence[float],
) -> tuple[RegionSummary, ...]:
    out = []
    for i, region in enumerate(regions):
        recs = [r for r in records if r.region == region]
        trace = [initial_productivity[i]] + [r.productivity for r in recs]
        out.append(
            RegionSummary(
                region,
                pace_of_evolution(trace),
                sum(r.mutations for r in recs),
                recs[-1].population,
                rd_spend[i],
            )
        )
    return tuple(out)


@dataclass(frozen=True)
class RunReport:
    name: str
    seed: int
    stream: tuple[str, ...]
    horizon: int
    regions: tuple[str, ...]
    initial_productivity: tuple[float, ...]
    initial_population: tuple[float, ...]
    records: tuple[StepRecord, ...]
    summary: tuple[RegionSummary, ...]

    @property
    def total_mutations(self) -> int:
        return sum(s.total_mutations for s in self.summary)

    @property
    def mean_pace(self) -> float:
        return math.fsum(s.pace for s in self.summary) / len(self.summary)

    @property
    def final_population(self) -> float:
        return math.fsum(s.final_population for s in self.summary)

    def region_records(self, region: str) -> list[StepRecord]:
        return [r for r in self.records if r.region == region]

    def productivity_trace(self, region: str) -> list[float]:
        i = self.regions.index(region)
        return [self.initial_productivity[i]] + [r.productivity for r in self.region_records(region)]

    def population_trace(self, region: str) -> list[float]:
        i = self.regions.index(region)
        return [self.initial_population[i]] + [r.population for r in self.region_records(region)]

    def verify(self) -> None:
        """Check record count and that the summary follows from the records."""
        expected = self.horizon * len(self.regions)
        if len(self.records) != expected:
            raise SimulationError(f"report holds {len(self.records)} records, expected {expected}")
        steps = [r.step for r in self.records[:: len(self.regions)]]
        if steps != list(range(1, self.horizon + 1)):
            raise SimulationError("step records are not exactly 1..horizon")
        again = summarise(
            self.regions, self.initial_productivity, self.records, [s.rd_spend for s in self.summary]
        )
        if again != self.summary:
            raise SimulationError("report summary does not match its step records")


# --------------------------------------------------------------------------
# Single run
# --------------------------------------------------------------------------


def _apply_shocks(config: ScenarioConfig, step: int, markets: dict, populations: dict) -> None:
    for shock in config.shocks:
        if shock.step != step:
            continue
        if shock.kind == "productivity":
            markets[shock.region] = markets[shock.region].scaled_productivity(shock.magnitude)
        else:
            pop = populations[shock.region]
            populations[shock.region] = replace(pop, population=pop.population * shock.magnitude)


def run_once(
    config: ScenarioConfig,
    seed_override: int | None = None,
    *,
    stream: RngStream | None = None,
    hooks: EngineHooks = DEFAULT_HOOKS,
) -> RunReport:
    """Simulate ``config`` for exactly ``config.horizon`` steps.

    Randomness comes from ``stream`` when given, otherwise from the root
    stream of ``seed_override`` or ``config.seed``. Every region draws from
    its own child streams, one per stage, so adding a region never perturbs
    the draws of another.

    Per step: shocks, then for each region idea arrivals, R&D, the financing
    round, ex-post realisation, selection and replicator drift; then
    diffusion over the post-selection snapshot (arrivals are judged next
    step); then demographics and metric capture.
    """
    base = stream if stream is not None else root_stream(config.seed if seed_override is None else seed_override)
    region_ids = config.region_ids
    specs = {r.name: r for r in config.regions}
    graph = RegionGraph(region_ids, tuple((e.source, e.target, e.weight) for e in config.edges))
    gen, sel, fin = config.genesis, config.selection, config.finance
    pool = EntrepreneurPool(fin.entrepreneurs, fin.concentration)
    policy = BankerPolicy(fin.consent_threshold)

    rngs = {
        r: {
            stage: base.derive("region").derive(r).derive(stage).generator()
            for stage in ("ideas", "rd", "finance", "ex_post")
        }
        for r in region_ids
    }
    diffusion_rng = base.derive("diffusion").generator()

    markets = {r.name: MarketState.initial(r.name, r.productivity, r.profit_rate) for r in config.regions}
    populations = {r.name: PopulationState(r.name, r.population, r.demographics.birth_factor) for r in config.regions}
    uncertain: dict[str, list[UncertainTechnology]] = {r: [] for r in region_ids}
    pending: dict[str, list[CertainTechnology]] = {r: [] for r in region_ids}
    rd_spend = {r: 0.0 for r in region_ids}
    records: list[StepRecord] = []
    observe = hooks.observe

    clock = new_clock(config.horizon)
    while not clock.done:
        clock = advance(clock)
        t = clock.t
        _apply_shocks(config, t, markets, populations)
        partial = {}
        for r in region_ids:
            g = rngs[r]
            market = markets[r]
            frontier = ProductivityParams(math.log(market.best.productivity), gen.productivity_spread)
            for idea in hooks.arrivals(specs[r].idea_rate, r, t, g["ideas"]):
                uncertain[r].append(develop(idea, gen.rd_delay, gen.ex_ante_p, frontier, g["rd"], gen.rd_cost))
                rd_spend[r] += gen.rd_cost
            if fin.staleness > 0:
                uncertain[r] = [u for u in uncertain[r] if t - u.readiness_step < fin.staleness]
            ready = ready_pool(uncertain[r], t)
            batch, tally = finance_round(pool, ready, policy, t, g["finance"], hooks.preferences)
            if batch.financed:
                financed = set(batch.financed)
                uncertain[r] = [u for u in uncertain[r] if u.id not in financed]
            candidates = [
                realize_ex_post(tech, market, gen.ex_ante_p, g["ex_post"], sel.ex_post_spread, step=t)
                for tech in batch.technologies
            ]
            candidates.extend(pending[r])
            known = market.ids()
            market = select_fittest(market, candidates, sel.entry_share)
            entrants = len(market.ids() - known)
            if observe:
                observe("select", t, market)
            markets[r] = replicator_step(market, sel.eta, sel.extinction_floor)
            if observe:
                observe("replicator", t, markets[r])
            partial[r] = (batch.mutation_count, len(ready), tally.top if tally else 0, entrants)

        pending = diffuse(markets, graph, diffusion_rng, gen.ex_ante_p, sel.ex_post_spread, step=t)
        if observe:
            for r in region_ids:
                observe("diffuse", t, markets[r])

        for r in region_ids:
            market = markets[r]
            productivity = market.productivity
            populations[r] = regional_step(populations[r], specs[r].demographics, productivity, t)
            mutations, n_ready, top, entrants = partial[r]
            records.append(
                StepRecord(
                    step=t,
                    region=r,
                    mutations=mutations,
                    productivity=productivity,
                    avg_profit_rate=market.average_profit_rate,
                    population=populations[r].population,
                    candidates=n_ready,
                    top_count=top,
                    entrants=entrants,
                    technologies=len(market.technologies),
                )
            )

    initial_productivity = tuple(float(s.productivity) for s in config.regions)
    report = RunReport(
        name=config.name,
        seed=base.seed,
        stream=base.path,
        horizon=config.horizon,
        regions=region_ids,
        initial_productivity=initial_productivity,
        initial_population=tuple(float(s.population) for s in config.regions),
        records=tuple(records),
        summary=summarise(region_ids, initial_productivity, records, [rd_spend[r] for r in region_ids]),
    )
    report.verify()
    return report


# --------------------------------------------------------------------------
# Replications
# --------------------------------------------------------------------------


def replication_stream(base_seed: int, k: int) -> RngStream:
    return root_stream(base_seed).derive("rep").derive(str(k))


@dataclass(frozen=True)
class ReplicationSummary:
    index: int
    pace: float
    mutations: int
    final_population: float

    @classmethod
    def of(cls, index: int, report: RunReport) -> ReplicationSummary:
        return cls(index, report.mean_pace, report.total_mutations, report.final_population)


def _sd(values: Sequence[float], mean: float) -> float:
    if len(values) < 2:
        return 0.0
    return math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (len(values) - 1))


@dataclass(frozen=True)
class Aggregate:
    """Statistics over replications, keyed and ordered by replication index.

    Sums are exactly rounded (``math.fsum``), so the result does not depend
    on the order in which replications finished or were merged.
    """

    entries: tuple[ReplicationSummary, ...]

    @classmethod
    def of(cls, entries: Iterable[ReplicationSummary]) -> Aggregate:
        ordered = tuple(sorted(entries, key=lambda e: e.index))
        if len({e.index for e in ordered}) != len(ordered):
            raise ValueError("duplicate replication index")
        return cls(ordered)

    def merge(self, other: Aggregate) -> Aggregate:
        return Aggregate.of(self.entries + other.entries)

    @property
    def count(self) -> int:
        return len(self.entries)

    @property
    def mean_pace(self) -> float:
        return math.fsum(e.pace for e in self.entries) / self.count

    @property
    def sd_pace(self) -> float:
        return _sd([e.pace for e in self.entries], self.mean_pace)

    @property
    def se_pace(self) -> float:
        return self.sd_pace / math.sqrt(self.count)

    @property
    def mean_mutations(self) -> float:
        return math.fsum(e.mutations for e in self.entries) / self.count

    @property
    def mean_final_population(self) -> float:
        return math.fsum(e.final_population for e in self.entries) / self.count


@dataclass(frozen=True)
class ManyResult:
    reports: tuple[RunReport, ...]
    aggregate: Aggregate


def _run_replication(args) -> RunReport:
    config, base_seed, k, hooks = args
    return run_once(config, stream=replication_stream(base_seed, k), hooks=hooks)


def _summarise_replication(args) -> ReplicationSummary:
    return ReplicationSummary.of(args[2], _run_replication(args))


def _map(fn, jobs: list, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    chunk = max(1, len(jobs) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs, chunksize=chunk))


def run_many(
    config: ScenarioConfig,
    replications: int,
    base_seed: int | None = None,
    *,
    workers: int = 1,
    hooks: EngineHooks = DEFAULT_HOOKS,
    indices: Sequence[int] | None = None,
    keep_reports: bool = True,
) -> ManyResult:
    """Run replications ``0..replications-1`` (or the given ``indices``).

    Replication ``k`` draws from the stream ``(base_seed, "rep", k)``, so any
    subset can be run separately and merged with :meth:`Aggregate.merge`.
    """
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    seed = config.seed if base_seed is None else base_seed
    idx = list(range(replications)) if indices is None else list(indices)
    jobs = [(config, seed, k, hooks) for k in idx]
    if keep_reports:
        reports = _map(_run_replication, jobs, workers)
        summaries = [ReplicationSummary.of(k, rep) for k, rep in zip(idx, reports)]
    else:
        reports = []
        summaries = _map(_summarise_replication, jobs, workers)
    return ManyResult(tuple(reports), Aggregate.of(summaries))


# --------------------------------------------------------------------------
# Threshold sweep
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    theta: int
    replications: int
    mean_mutations: float
    mean_pace: float
    sd_pace: float


@dataclass(frozen=True)
class SweepReport:
    name: str
    base_seed: int
    rows: tuple[SweepRow, ...]
    correlation: float | None

    @property
    def thetas(self) -> list[int]:
        return [r.theta for r in self.rows]


def validate_thetas(thetas: Sequence[int]) -> tuple[int, ...]:
    values = tuple(thetas)
    if not values:
        raise ThetaListInvalid("theta list is empty")
    if any(isinstance(t, bool) or not isinstance(t, (int, np.integer)) or t < 0 for t in values):
        raise ThetaListInvalid(f"thetas must be non-negative integers: {list(values)}")
    if list(values) != sorted(set(values)):
        raise ThetaListInvalid(f"thetas must be ascending and distinct: {list(values)}")
    return tuple(int(t) for t in values)


def spearman(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Rank correlation, or ``None`` when undefined (fewer than two points or a constant series)."""
    if len(x) < 2 or len(set(x)) < 2 or len(set(y)) < 2:
        return None
    rho = stats.spearmanr(x, y).statistic
    return None if math.isnan(rho) else float(rho)


def sweep_threshold(
    config: ScenarioConfig,
    thetas: Sequence[int],
    replications: int,
    base_seed: int | None = None,
    *,
    workers: int = 1,
    hooks: EngineHooks = DEFAULT_HOOKS,
) -> SweepReport:
    """Rerun ``config`` at each consent threshold, all else held fixed.

    Every theta uses the same replication streams (common random numbers).
    """
    values = validate_thetas(thetas)
    seed = config.seed if base_seed is None else base_seed
    rows = []
    for theta in values:
        agg = run_many(
            config.with_threshold(theta), replications, seed, workers=workers, hooks=hooks, keep_reports=False
        ).aggregate
        rows.append(SweepRow(theta, agg.count, agg.mean_mutations, agg.mean_pace, agg.sd_pace))
    rho = spearman([float(r.theta) for r in rows], [r.mean_pace for r in rows])
    return SweepReport(config.name, seed, tuple(rows), rho)
