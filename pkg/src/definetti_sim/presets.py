"""Named, runnable scenario presets."""

from __future__ import annotations

from dataclasses import replace

from .demographics import WORLD_1900, DemographicParams
from .errors import UnknownPreset
from .scenario import (
    Edge,
    FinanceParams,
    GenesisParams,
    RegionSpec,
    ScenarioConfig,
    SelectionParams,
    Shock,
    SweepDirective,
)

REFERENCE_THETAS = (0, 10, 20, 30, 40, 50, 60)


def reference() -> ScenarioConfig:
    """Single-region economy used for the consent-threshold sweep."""
    return ScenarioConfig(
        name="reference",
        horizon=30,
        seed=7,
        regions=(RegionSpec("home", idea_rate=2.0),),
        genesis=GenesisParams(idea_rate=2.0),
        finance=FinanceParams(consent_threshold=20),
    )


def _two_regions(name: str, theta: int, horizon: int = 200) -> ScenarioConfig:
    """An innovating core linked one-way to a slower periphery.

    The core industrialises at step 100; the periphery stays on traditional
    agriculture, capped by its land.
    """
    farming = DemographicParams(
        base_birth=0.03,
        base_death=0.025,
        requirement_per_capita=0.4,
        land_capacity=600.0,
        labor_share=0.5,
    )
    industrial = replace(farming, birth_factor=1.5, birth_factor_decay=0.05, transition_step=100)
    return ScenarioConfig(
        name=name,
        horizon=horizon,
        seed=42,
        regions=(
            RegionSpec("core", idea_rate=1.0, population=1000.0, demographics=industrial),
            RegionSpec("periphery", idea_rate=0.2, population=1000.0, demographics=farming),
        ),
        edges=(Edge("core", "periphery", 0.1),),
        genesis=GenesisParams(idea_rate=1.0),
        finance=FinanceParams(consent_threshold=theta),
        demographics=farming,
    )


def everlasting_growth() -> ScenarioConfig:
    return _two_regions("everlasting-growth", theta=0)


def ancien_regime() -> ScenarioConfig:
    cfg = _two_regions("ancien-regime", theta=0)
    return cfg.with_threshold(cfg.finance.entrepreneurs + 1)


def collapse() -> ScenarioConfig:
    cfg = _two_regions("collapse", theta=20)
    mid = cfg.horizon // 2
    shocks = tuple(
        Shock(mid, r.name, kind, magnitude)
        for r in cfg.regions
        for kind, magnitude in (("population", 0.1), ("productivity", 0.3))
    )
    return replace(cfg, shocks=shocks)


def panglossian_sweep() -> ScenarioConfig:
    return replace(reference(), name="panglossian-sweep", sweep=SweepDirective(REFERENCE_THETAS, 100))


def industrial_demographics(base_birth: float = 0.0) -> DemographicParams:
    """Industrial regime from step 0 with a fading patriarchal birth multiplier.

    Only ``base_birth`` is calibrated; the other values are fixed choices.
    """
    return DemographicParams(
        base_birth=base_birth,
        base_death=0.021,
        birth_factor=3.5,
        birth_factor_decay=0.03,
        requirement_per_capita=0.4,
        land_capacity=0.0,
        labor_share=0.5,
        famine_mortality=0.5,
        transition_step=0,
    )


def industrial_transition() -> ScenarioConfig:
    """A century of industrial population growth from the 1900 world total (millions)."""
    demo = industrial_demographics(INDUSTRIAL_BASE_BIRTH)
    return ScenarioConfig(
        name="industrial-transition",
        horizon=100,
        seed=1900,
        regions=(RegionSpec("world", population=WORLD_1900, idea_rate=0.0, demographics=demo),),
        genesis=GenesisParams(idea_rate=0.0),
        demographics=demo,
    )


def malthusian_trap() -> ScenarioConfig:
    """Traditional agriculture with land as the binding constraint."""
    demo = DemographicParams(
        base_birth=0.04,
        base_death=0.03,
        birth_factor=1.0,
        requirement_per_capita=1.0,
        land_capacity=500.0,
        labor_share=0.8,
        famine_mortality=0.5,
    )
    return ScenarioConfig(
        name="malthusian-trap",
        horizon=500,
        seed=1798,
        regions=(RegionSpec("village", productivity=2.0, population=100.0, idea_rate=0.0, demographics=demo),),
        genesis=GenesisParams(idea_rate=0.0),
        demographics=demo,
    )


# found by tools/calibrate_malthus.py
INDUSTRIAL_BASE_BIRTH = 0.01922666759310232

PRESETS = {
    "collapse": collapse,
    "ancien-regime": ancien_regime,
    "everlasting-growth": everlasting_growth,
    "panglossian-sweep": panglossian_sweep,
    "reference": reference,
    "industrial-transition": industrial_transition,
    "malthusian-trap": malthusian_trap,
}


def preset(name: str) -> ScenarioConfig:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return factory()
