from __future__ import annotations

import sys
from dataclasses import replace

import pytest

from definetti_sim.genesis import ProductivityParams, UncertainTechnology
from definetti_sim.scenario import Edge, GenesisParams, RegionSpec, ScenarioConfig


def make_tech(tid: str, location: float = 0.0, ready: int = 0, region: str = "r", **kw) -> UncertainTechnology:
    return UncertainTechnology(
        id=tid,
        source_idea=tid,
        conception_step=min(ready, kw.pop("conceived", ready)),
        ex_ante_success_prob=kw.pop("p", 0.3),
        productivity_params=ProductivityParams(location, kw.pop("spread", 0.1)),
        readiness_step=ready,
        region=region,
        **kw,
    )


def make_config(
    regions=(("a", 1.0),),
    edges=(),
    horizon: int = 20,
    seed: int = 1,
    **overrides,
) -> ScenarioConfig:
    """Small multi-region config; ``regions`` is a list of (name, idea_rate)."""
    cfg = ScenarioConfig(
        name="test",
        horizon=horizon,
        seed=seed,
        regions=tuple(RegionSpec(name, idea_rate=rate) for name, rate in regions),
        edges=tuple(Edge(*e) for e in edges),
        genesis=GenesisParams(idea_rate=1.0),
    )
    return replace(cfg, **overrides)


@pytest.fixture
def small_config() -> ScenarioConfig:
    return make_config(regions=(("a", 1.5), ("b", 0.5)), edges=(("a", "b", 0.3),), horizon=25)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
