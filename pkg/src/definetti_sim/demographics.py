"""Malthusian population sub-model.

Two opposing forces act on population: famine among the unnourished and a
patriarchal multiplier on births. Under traditional agriculture food output
is capped by land; the industrial regime removes the cap, and the birth
multiplier then fades toward 1 with a lag.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable

WORLD_1900 = 1656.0
WORLD_2000 = 6000.0
CENTURY_RATIO = WORLD_2000 / WORLD_1900


class Mode(str, enum.Enum):
    TRADITIONAL = "traditional"
    INDUSTRIAL = "industrial"


@dataclass(frozen=True)
class PopulationState:
    region: str
    population: float
    birth_factor: float = 1.0
    mode: Mode = Mode.TRADITIONAL

    def __post_init__(self) -> None:
        if self.population < 0:
            raise ValueError(f"population must be >= 0, got {self.population}")
        if self.birth_factor < 0:
            raise ValueError(f"birth_factor must be >= 0, got {self.birth_factor}")


@dataclass(frozen=True)
class FoodAccount:
    supply: float
    requirement_per_capita: float = 1.0

    def __post_init__(self) -> None:
        if self.supply < 0:
            raise ValueError("food supply must be >= 0")
        if self.requirement_per_capita <= 0:
            raise ValueError("requirement_per_capita must be > 0")

    @property
    def feeds(self) -> float:
        return self.supply / self.requirement_per_capita


def food_supply(productivity: float, labor: float, land_capacity: float, mode: Mode) -> float:
    if min(productivity, labor, land_capacity) < 0:
        raise ValueError("food_supply inputs must be non-negative")
    output = productivity * labor
    if Mode(mode) is Mode.TRADITIONAL:
        return min(output, land_capacity)
    return output


def step_population(
    state: PopulationState,
    food: FoodAccount,
    base_birth: float,
    base_death: float,
    famine_mortality: float = 0.5,
) -> PopulationState:
    for name, rate in (("base_birth", base_birth), ("base_death", base_death), ("famine_mortality", famine_mortality)):
        if not 0.0 <= rate <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {rate}")
    pop = state.population
    if pop == 0.0:
        return state
    births = pop * base_birth * state.birth_factor
    nourished = min(pop, food.feeds)
    famine_deaths = (pop - nourished) * famine_mortality
    natural_deaths = pop * base_death
    return replace(state, population=max(0.0, pop + births - natural_deaths - famine_deaths))


def industrialize(
    state: PopulationState,
    transition_step: int,
    current_step: int,
    birth_factor_decay: float,
) -> PopulationState:
    """Switch to the industrial regime at ``transition_step``.

    On every later step the birth multiplier closes a fraction
    ``birth_factor_decay`` of its remaining gap to 1.
    """
    if transition_step < 0 or current_step < transition_step:
        return state
    factor = state.birth_factor
    if current_step > transition_step:
        factor = 1.0 + (factor - 1.0) * (1.0 - birth_factor_decay)
    return replace(state, mode=Mode.INDUSTRIAL, birth_factor=factor)


@dataclass(frozen=True)
class DemographicParams:
    base_birth: float = 0.03
    base_death: float = 0.03
    birth_factor: float = 1.0
    birth_factor_decay: float = 0.0
    requirement_per_capita: float = 0.4
    land_capacity: float = 1000.0
    labor_share: float = 0.5
    famine_mortality: float = 0.5
    transition_step: int = -1


def regional_step(
    state: PopulationState,
    params: DemographicParams,
    productivity: float,
    step: int,
) -> PopulationState:
    """Industrialise if due, produce food with the region's labor, then update population."""
    state = industrialize(state, params.transition_step, step, params.birth_factor_decay)
    labor = state.population * params.labor_share
    supply = food_supply(productivity, labor, params.land_capacity, state.mode)
    food = FoodAccount(supply, params.requirement_per_capita)
    return step_population(state, food, params.base_birth, params.base_death, params.famine_mortality)


def simulate_population(
    params: DemographicParams,
    initial: float,
    steps: int,
    productivity: float = 1.0,
) -> list[float]:
    """Population trace of length ``steps + 1`` at constant productivity."""
    state = PopulationState("calibration", initial, params.birth_factor)
    trace = [initial]
    for t in range(1, steps + 1):
        state = regional_step(state, params, productivity, t)
        trace.append(state.population)
    return trace


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Root of a monotone ``f`` on ``[lo, hi]``; ``f(lo)`` and ``f(hi)`` must differ in sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def calibrate_base_birth(
    params: DemographicParams,
    target_ratio: float = CENTURY_RATIO,
    steps: int = 100,
    initial: float = WORLD_1900,
    productivity: float = 1.0,
    lo: float = 0.0,
    hi: float = 0.2,
) -> DemographicParams:
    """Find ``base_birth`` so that ``steps`` steps multiply population by ``target_ratio``."""

    def gap(b: float) -> float:
        trace = simulate_population(replace(params, base_birth=b), initial, steps, productivity)
        return math.log(trace[-1] / trace[0]) - math.log(target_ratio)

    return replace(params, base_birth=bisect(gap, lo, hi))
