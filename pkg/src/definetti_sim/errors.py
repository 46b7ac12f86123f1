"""Exception hierarchy shared by every module of the simulator."""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for all model and runtime errors."""


class HorizonInvalid(SimulationError, ValueError):
    pass


class HorizonExceeded(SimulationError):
    pass


class LabelEmpty(SimulationError, ValueError):
    pass


class DelayInvalid(SimulationError, ValueError):
    pass


class NoCandidates(SimulationError, ValueError):
    pass


class NotFinanced(SimulationError):
    pass


class RegionMismatch(SimulationError, ValueError):
    pass


class TraceTooShort(SimulationError, ValueError):
    pass


class NonPositiveProductivity(SimulationError, ValueError):
    pass


class UnknownPreset(SimulationError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class LengthMismatch(SimulationError, ValueError):
    pass


class AllMassExcluded(SimulationError, ValueError):
    pass


class ThetaListInvalid(SimulationError, ValueError):
    pass


class ScenarioError(SimulationError):
    """Base class for scenario document problems (CLI exit status 2)."""


class ScenarioSyntaxError(ScenarioError):
    """Malformed scenario document; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class SchemaError(ScenarioError):
    """Well-formed document that violates the schema at ``path``."""

    def __init__(self, path: str, message: str, line: int | None = None) -> None:
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{path}: {message}{where}")
        self.path = path
        self.message = message
        self.line = line
