"""Agent-based simulator of technological evolution under a competition-controlled financing gate."""

from .core import RngStream, SimulationClock, advance, derive_stream, new_clock, root_stream
from .montecarlo import RunReport, SweepReport, run_many, run_once, sweep_threshold
from .presets import preset
from .scenario import ScenarioConfig, parse_scenario, serialize_scenario

__version__ = "0.1.0"

__all__ = [
    "RngStream",
    "RunReport",
    "ScenarioConfig",
    "SimulationClock",
    "SweepReport",
    "advance",
    "derive_stream",
    "new_clock",
    "parse_scenario",
    "preset",
    "root_stream",
    "run_many",
    "run_once",
    "serialize_scenario",
    "sweep_threshold",
]
