"""Scenario documents: schema, parser, serializer and subjective reweighting.

A scenario file is UTF-8 text, one ``dotted.key = value`` assignment per
line. ``#`` starts a comment anywhere outside a quoted string. Values are
integers, decimals, ``true``/``false``, double-quoted strings, or flat
``[a, b, c]`` lists of those. Repeated sections use an integer path segment
(``region.0.name``, ``region.1.name``) numbered contiguously from 0.

The key tables below (``TOP_KEYS`` and ``SECTIONS``) are the single source of truth: the parser
validates against it, and ``definetti-sim scenario-schema`` prints it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields, replace
from typing import Any, Callable, Sequence

from .demographics import DemographicParams
from .errors import (
    AllMassExcluded,
    LengthMismatch,
    SchemaError,
    ScenarioSyntaxError,
)

SCHEMA_VERSION = "1"
UINT64_MAX = 2**64 - 1


# --------------------------------------------------------------------------
# Configuration values
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GenesisParams:
    idea_rate: float = 0.5
    rd_delay: int = 2
    ex_ante_p: float = 0.3
    productivity_spread: float = 0.1
    rd_cost: float = 1.0


@dataclass(frozen=True)
class FinanceParams:
    entrepreneurs: int = 100
    concentration: float = 3.0
    consent_threshold: int = 20
    staleness: int = 0


@dataclass(frozen=True)
class SelectionParams:
    entry_share: float = 0.05
    eta: float = 0.5
    extinction_floor: float = 1e-3
    ex_post_spread: float = 0.05


@dataclass(frozen=True)
class RegionSpec:
    name: str
    productivity: float = 1.0
    profit_rate: float = 0.05
    population: float = 100.0
    idea_rate: float = 0.5
    demographics: DemographicParams = field(default_factory=DemographicParams)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: float


@dataclass(frozen=True)
class Shock:
    step: int
    region: str
    kind: str
    magnitude: float


@dataclass(frozen=True)
class SweepDirective:
    thetas: tuple[int, ...]
    replications: int = 100


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    horizon: int
    seed: int
    regions: tuple[RegionSpec, ...]
    edges: tuple[Edge, ...] = ()
    genesis: GenesisParams = GenesisParams()
    finance: FinanceParams = FinanceParams()
    selection: SelectionParams = SelectionParams()
    demographics: DemographicParams = DemographicParams()
    shocks: tuple[Shock, ...] = ()
    sweep: SweepDirective | None = None

    @property
    def region_ids(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.regions)

    def with_threshold(self, theta: int) -> ScenarioConfig:
        return replace(self, finance=replace(self.finance, consent_threshold=int(theta)))

    def with_seed(self, seed: int) -> ScenarioConfig:
        return replace(self, seed=int(seed))


# --------------------------------------------------------------------------
# Schema registry
# --------------------------------------------------------------------------

REQUIRED = object()


@dataclass(frozen=True)
class Key:
    path: str
    kind: str  # int | float | str | int-list
    default: Any
    check: Callable[[Any], bool]
    valid: str
    doc: str


def _between(lo: float, hi: float) -> Callable[[Any], bool]:
    return lambda v: lo <= v <= hi


def _at_least(lo: float) -> Callable[[Any], bool]:
    return lambda v: v >= lo


_any = lambda v: True  # noqa: E731
_nonempty = lambda v: len(v) > 0  # noqa: E731
_gt0 = lambda v: v > 0  # noqa: E731
_open01 = lambda v: 0 < v < 1  # noqa: E731

_D = DemographicParams()
_G = GenesisParams()
_F = FinanceParams()
_S = SelectionParams()

DEMOGRAPHIC_KEYS: tuple[Key, ...] = (
    Key("base_birth", "float", _D.base_birth, _between(0, 1), "[0, 1]", "baseline births per person per step"),
    Key("base_death", "float", _D.base_death, _between(0, 1), "[0, 1]", "natural deaths per person per step"),
    Key("birth_factor", "float", _D.birth_factor, _at_least(0), ">= 0", "patriarchal multiplier on base_birth"),
    Key("birth_factor_decay", "float", _D.birth_factor_decay, _between(0, 1), "[0, 1]",
        "fraction of the gap birth_factor - 1 closed per industrial step"),
    Key("requirement_per_capita", "float", _D.requirement_per_capita, _gt0, "> 0", "food units per person per step"),
    Key("land_capacity", "float", _D.land_capacity, _at_least(0), ">= 0", "traditional-mode food ceiling"),
    Key("labor_share", "float", _D.labor_share, _between(0, 1), "[0, 1]", "fraction of population working on food"),
    Key("famine_mortality", "float", _D.famine_mortality, _between(0, 1), "[0, 1]",
        "death rate among the unnourished per step"),
    Key("transition_step", "int", _D.transition_step, _at_least(-1), ">= -1",
        "step at which the industrial regime starts (-1: never)"),
)

TOP_KEYS: tuple[Key, ...] = (
    Key("name", "str", REQUIRED, _nonempty, "non-empty", "scenario name"),
    Key("horizon", "int", REQUIRED, _at_least(1), ">= 1", "number of steps T (finite)"),
    Key("seed", "int", REQUIRED, _between(0, UINT64_MAX), "[0, 2^64-1]", "root random seed"),
    Key("genesis.idea_rate", "float", _G.idea_rate, _at_least(0), ">= 0",
        "default Poisson idea arrivals per region per step"),
    Key("genesis.rd_delay", "int", _G.rd_delay, _at_least(1), ">= 1", "steps from idea to ready technology"),
    Key("genesis.ex_ante_p", "float", _G.ex_ante_p, _between(0, 1), "[0, 1]",
        "probability a new technology beats the average profit rate"),
    Key("genesis.productivity_spread", "float", _G.productivity_spread, _at_least(0), ">= 0",
        "log-productivity spread of R&D outcomes"),
    Key("genesis.rd_cost", "float", _G.rd_cost, _at_least(0), ">= 0", "R&D spend recorded per developed idea"),
    Key("finance.entrepreneurs", "int", _F.entrepreneurs, _at_least(1), ">= 1", "entrepreneurs per region"),
    Key("finance.concentration", "float", _F.concentration, _at_least(0), ">= 0",
        "sharpness of entrepreneurs' preference for higher expected productivity"),
    Key("finance.consent_threshold", "int", _F.consent_threshold, _at_least(0), ">= 0",
        "banker's minimum preference count (theta)"),
    Key("finance.staleness", "int", _F.staleness, _at_least(0), ">= 0",
        "steps an unfinanced ready technology stays eligible (0: forever)"),
    Key("selection.entry_share", "float", _S.entry_share, _open01, "(0, 1)", "adoption share of a new entrant"),
    Key("selection.eta", "float", _S.eta, _at_least(0), ">= 0", "replicator selection intensity"),
    Key("selection.extinction_floor", "float", _S.extinction_floor, lambda v: 0 <= v < 1, "[0, 1)",
        "shares below this are removed"),
    Key("selection.ex_post_spread", "float", _S.ex_post_spread, _gt0, "> 0",
        "scale of realised profit-rate deviations from the average"),
    *(replace(k, path="demographics." + k.path) for k in DEMOGRAPHIC_KEYS),
    Key("sweep.thetas", "int-list", None, lambda v: len(v) > 0 and all(t >= 0 for t in v),
        "non-empty, ascending, distinct, >= 0", "theta values of a sweep directive (optional)"),
    Key("sweep.replications", "int", 100, _at_least(1), ">= 1", "replications per theta of a sweep directive"),
)

REGION_KEYS: tuple[Key, ...] = (
    Key("name", "str", REQUIRED, _nonempty, "non-empty, unique", "region id"),
    Key("productivity", "float", 1.0, _gt0, "> 0", "productivity of the initial incumbent technology"),
    Key("profit_rate", "float", 0.05, _any, "any", "profit rate of the initial incumbent technology"),
    Key("population", "float", 100.0, _at_least(0), ">= 0", "initial population (millions)"),
    Key("idea_rate", "float", None, _at_least(0), ">= 0", "regional idea rate (default: genesis.idea_rate)"),
    *(replace(k, path="demographics." + k.path, default=None,
              doc=k.doc + " (default: demographics." + k.path + ")") for k in DEMOGRAPHIC_KEYS),
)

EDGE_KEYS: tuple[Key, ...] = (
    Key("from", "str", REQUIRED, _nonempty, "declared region", "source region"),
    Key("to", "str", REQUIRED, _nonempty, "declared region, != from", "destination region"),
    Key("weight", "float", REQUIRED, _between(0, 1), "[0, 1]", "per-step diffusion probability"),
)

SHOCK_KEYS: tuple[Key, ...] = (
    Key("step", "int", REQUIRED, _at_least(1), "[1, horizon]", "step at which the shock hits"),
    Key("region", "str", REQUIRED, _nonempty, "declared region", "affected region"),
    Key("kind", "str", REQUIRED, lambda v: v in ("population", "productivity"),
        "population | productivity", "what the shock multiplies"),
    Key("magnitude", "float", REQUIRED, _at_least(0), ">= 0", "multiplicative factor"),
)

SECTIONS: dict[str, tuple[Key, ...]] = {"region": REGION_KEYS, "edge": EDGE_KEYS, "shock": SHOCK_KEYS}
_TOP = {k.path: k for k in TOP_KEYS}


def known_keys() -> list[str]:
    """Every accepted key, with ``N`` standing for a section index."""
    out = [k.path for k in TOP_KEYS]
    for section, keys in SECTIONS.items():
        out.extend(f"{section}.N.{k.path}" for k in keys)
    return out


def _fmt_default(key: Key) -> str:
    if key.default is REQUIRED:
        return "required"
    if key.default is None:
        return "-"
    return format_value(key.default)


def schema_text() -> str:
    lines = [
        f"# definetti-sim scenario schema v{SCHEMA_VERSION}",
        "# key | type | default | valid | description",
    ]
    for key in TOP_KEYS:
        lines.append(f"{key.path} | {key.kind} | {_fmt_default(key)} | {key.valid} | {key.doc}")
    for section, keys in SECTIONS.items():
        for key in keys:
            lines.append(
                f"{section}.N.{key.path} | {key.kind} | {_fmt_default(key)} | {key.valid} | {key.doc}"
            )
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Lexing
# --------------------------------------------------------------------------

_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*")
_NUM_RE = re.compile(r"-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Assignment:
    path: str
    value: Any
    line: int
    column: int  # column of the value


class _Cursor:
    def __init__(self, text: str, lineno: int) -> None:
        self.text = text
        self.pos = 0
        self.lineno = lineno

    def error(self, message: str) -> ScenarioSyntaxError:
        return ScenarioSyntaxError(message, self.lineno, self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text) or self.text[self.pos] == "#"

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""


def _scan_scalar(cur: _Cursor) -> Any:
    ch = cur.peek()
    if ch == '"':
        return _scan_string(cur)
    m = _NUM_RE.match(cur.text, cur.pos)
    if m and (ch.isdigit() or ch in "-."):
        token = m.group(0)
        cur.pos = m.end()
        if re.fullmatch(r"-?\d+", token):
            return int(token)
        return float(token)
    m = _WORD_RE.match(cur.text, cur.pos)
    if m and m.group(0) in ("true", "false"):
        cur.pos = m.end()
        return m.group(0) == "true"
    if not ch or ch == "#":
        raise cur.error("missing value")
    raise cur.error(f"invalid value starting with {ch!r}")


def _scan_string(cur: _Cursor) -> str:
    start = cur.pos
    cur.pos += 1
    out = []
    while cur.pos < len(cur.text):
        ch = cur.text[cur.pos]
        if ch == '"':
            cur.pos += 1
            return "".join(out)
        if ch == "\\":
            nxt = cur.text[cur.pos + 1] if cur.pos + 1 < len(cur.text) else ""
            if nxt not in ('"', "\\"):
                raise cur.error(f"invalid escape \\{nxt}")
            out.append(nxt)
            cur.pos += 2
            continue
        out.append(ch)
        cur.pos += 1
    cur.pos = start
    raise cur.error("unterminated string")


def _scan_value(cur: _Cursor) -> Any:
    if cur.peek() != "[":
        return _scan_scalar(cur)
    cur.pos += 1
    items: list[Any] = []
    cur.skip_ws()
    if cur.peek() == "]":
        cur.pos += 1
        return items
    while True:
        cur.skip_ws()
        if cur.peek() == "[":
            raise cur.error("nested lists are not allowed")
        items.append(_scan_scalar(cur))
        cur.skip_ws()
        ch = cur.peek()
        if ch == ",":
            cur.pos += 1
            continue
        if ch == "]":
            cur.pos += 1
            return items
        raise cur.error("expected ',' or ']' in list")


def tokenize(text: str) -> list[Assignment]:
    """Split a document into assignments, raising on malformed lines."""
    if text.startswith("\ufeff"):
        text = text[1:]
    out = []
    # only \n (optionally preceded by \r) ends a line; other Unicode
    # separators are ordinary characters inside strings
    for lineno, raw in enumerate(text.split("\n"), start=1):
        raw = raw.removesuffix("\r")
        cur = _Cursor(raw, lineno)
        cur.skip_ws()
        if cur.at_end():
            continue
        m = _KEY_RE.match(raw, cur.pos)
        if not m:
            raise cur.error("expected a key")
        path = m.group(0)
        cur.pos = m.end()
        cur.skip_ws()
        if cur.peek() != "=":
            raise cur.error("expected '='")
        cur.pos += 1
        cur.skip_ws()
        col = cur.pos + 1
        value = _scan_value(cur)
        cur.skip_ws()
        if not cur.at_end():
            raise cur.error("unexpected text after value")
        out.append(Assignment(path, value, lineno, col))
    return out


# --------------------------------------------------------------------------
# Validation
# --------------------------------------------------------------------------


def _coerce(key: Key, full_path: str, a: Assignment) -> Any:
    v = a.value
    kind = key.kind
    if kind == "int":
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(full_path, f"expected an integer, got {format_value(v)}", a.line)
    elif kind == "float":
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(full_path, f"expected a number, got {format_value(v)}", a.line)
        v = float(v)
        if not math.isfinite(v):
            raise SchemaError(full_path, "must be finite", a.line)
    elif kind == "str":
        if not isinstance(v, str):
            raise SchemaError(full_path, f"expected a quoted string, got {format_value(v)}", a.line)
    elif kind == "int-list":
        if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
            raise SchemaError(full_path, "expected a list of integers", a.line)
        v = tuple(v)
    if not key.check(v):
        raise SchemaError(full_path, f"value {format_value(v)} out of range (valid: {key.valid})", a.line)
    return v


def _collect(assignments: Sequence[Assignment]):
    top: dict[str, tuple[Any, int]] = {}
    sections: dict[str, dict[int, dict[str, tuple[Any, int]]]] = {s: {} for s in SECTIONS}
    seen: dict[str, int] = {}
    for a in assignments:
        if a.path in seen:
            raise SchemaError(a.path, f"duplicate key (first set on line {seen[a.path]})", a.line)
        seen[a.path] = a.line
        head, _, rest = a.path.partition(".")
        if head in SECTIONS:
            idx_str, _, sub = rest.partition(".")
            if not idx_str.isdigit() or not sub:
                raise SchemaError(a.path, f"unknown key (expected {head}.N.<field>)", a.line)
            if len(idx_str) > 1 and idx_str.startswith("0"):
                raise SchemaError(a.path, "section index must not have leading zeros", a.line)
            keys = {k.path: k for k in SECTIONS[head]}
            if sub not in keys:
                raise SchemaError(a.path, "unknown key", a.line)
            value = _coerce(keys[sub], a.path, a)
            sections[head].setdefault(int(idx_str), {})[sub] = (value, a.line)
        else:
            if a.path not in _TOP:
                raise SchemaError(a.path, "unknown key", a.line)
            top[a.path] = (_coerce(_TOP[a.path], a.path, a), a.line)
    return top, sections


def _section_list(name: str, entries: dict[int, dict[str, tuple[Any, int]]]) -> list[dict[str, tuple[Any, int]]]:
    idx = sorted(entries)
    if idx != list(range(len(idx))):
        missing = next(i for i in range(len(idx) + 1) if i not in entries)
        raise SchemaError(f"{name}.{missing}", "section indices must be contiguous from 0")
    out = []
    for i in idx:
        for key in SECTIONS[name]:
            if key.default is REQUIRED and key.path not in entries[i]:
                raise SchemaError(f"{name}.{i}.{key.path}", "missing required field")
        out.append(entries[i])
    return out


def _value(d: dict[str, tuple[Any, int]], key: str, default: Any) -> Any:
    return d[key][0] if key in d else default


def _demographics_from(d: dict[str, tuple[Any, int]], prefix: str, base: DemographicParams) -> DemographicParams:
    kw = {}
    for k in DEMOGRAPHIC_KEYS:
        if prefix + k.path in d:
            kw[k.path] = d[prefix + k.path][0]
    return replace(base, **kw)


def build_config(assignments: Sequence[Assignment]) -> ScenarioConfig:
    top, sections = _collect(assignments)
    for key in TOP_KEYS:
        if key.default is REQUIRED and key.path not in top:
            raise SchemaError(key.path, "missing required field")

    genesis = GenesisParams(**{f.name: _value(top, f"genesis.{f.name}", getattr(_G, f.name)) for f in fields(GenesisParams)})
    finance = FinanceParams(**{f.name: _value(top, f"finance.{f.name}", getattr(_F, f.name)) for f in fields(FinanceParams)})
    selection = SelectionParams(
        **{f.name: _value(top, f"selection.{f.name}", getattr(_S, f.name)) for f in fields(SelectionParams)}
    )
    demographics = _demographics_from(top, "demographics.", DemographicParams())

    region_entries = _section_list("region", sections["region"])
    if not region_entries:
        raise SchemaError("region", "at least one region is required")
    regions = []
    names: set[str] = set()
    for i, d in enumerate(region_entries):
        name = d["name"][0]
        if name in names:
            raise SchemaError(f"region.{i}.name", f"duplicate region id {name!r}", d["name"][1])
        names.add(name)
        regions.append(
            RegionSpec(
                name=name,
                productivity=_value(d, "productivity", 1.0),
                profit_rate=_value(d, "profit_rate", 0.05),
                population=_value(d, "population", 100.0),
                idea_rate=_value(d, "idea_rate", genesis.idea_rate),
                demographics=_demographics_from(d, "demographics.", demographics),
            )
        )

    edges = []
    pairs: set[tuple[str, str]] = set()
    for i, d in enumerate(_section_list("edge", sections["edge"])):
        src, dst = d["from"][0], d["to"][0]
        for field_name, rid in (("from", src), ("to", dst)):
            if rid not in names:
                raise SchemaError(f"edge.{i}.{field_name}", f"dangling region reference {rid!r}", d[field_name][1])
        if src == dst:
            raise SchemaError(f"edge.{i}.to", "self-links are not allowed", d["to"][1])
        if (src, dst) in pairs:
            raise SchemaError(f"edge.{i}", f"duplicate edge {src}->{dst}", d["from"][1])
        pairs.add((src, dst))
        edges.append(Edge(src, dst, d["weight"][0]))

    horizon = top["horizon"][0]
    shocks = []
    for i, d in enumerate(_section_list("shock", sections["shock"])):
        if d["region"][0] not in names:
            raise SchemaError(f"shock.{i}.region", f"dangling region reference {d['region'][0]!r}", d["region"][1])
        if d["step"][0] > horizon:
            raise SchemaError(f"shock.{i}.step", f"step {d['step'][0]} beyond horizon {horizon}", d["step"][1])
        shocks.append(Shock(d["step"][0], d["region"][0], d["kind"][0], d["magnitude"][0]))

    sweep = None
    if "sweep.thetas" in top:
        thetas, line = top["sweep.thetas"]
        if list(thetas) != sorted(set(thetas)):
            raise SchemaError("sweep.thetas", "must be ascending and distinct", line)
        sweep = SweepDirective(thetas, _value(top, "sweep.replications", 100))
    elif "sweep.replications" in top:
        raise SchemaError("sweep.thetas", "missing required field (sweep.replications given)")

    return ScenarioConfig(
        name=top["name"][0],
        horizon=horizon,
        seed=top["seed"][0],
        regions=tuple(regions),
        edges=tuple(edges),
        genesis=genesis,
        finance=finance,
        selection=selection,
        demographics=demographics,
        shocks=tuple(shocks),
        sweep=sweep,
    )


def parse_scenario(text: str) -> ScenarioConfig:
    return build_config(tokenize(text))


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------


def format_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    raise TypeError(f"cannot format {type(v).__name__}")


def serialize_scenario(config: ScenarioConfig) -> str:
    """Render a config so that ``parse_scenario`` returns an equal value.

    Every field is written explicitly, so the output does not depend on the
    defaults table of the reader.
    """
    lines = [f"name = {format_value(config.name)}", f"horizon = {config.horizon}", f"seed = {config.seed}"]
    for block in ("genesis", "finance", "selection", "demographics"):
        params = getattr(config, block)
        for f in fields(params):
            lines.append(f"{block}.{f.name} = {format_value(getattr(params, f.name))}")
    for i, r in enumerate(config.regions):
        lines.append(f"region.{i}.name = {format_value(r.name)}")
        for attr in ("productivity", "profit_rate", "population", "idea_rate"):
            lines.append(f"region.{i}.{attr} = {format_value(getattr(r, attr))}")
        for f in fields(r.demographics):
            lines.append(f"region.{i}.demographics.{f.name} = {format_value(getattr(r.demographics, f.name))}")
    for i, e in enumerate(config.edges):
        lines.append(f"edge.{i}.from = {format_value(e.source)}")
        lines.append(f"edge.{i}.to = {format_value(e.target)}")
        lines.append(f"edge.{i}.weight = {format_value(e.weight)}")
    for i, s in enumerate(config.shocks):
        lines.append(f"shock.{i}.step = {s.step}")
        lines.append(f"shock.{i}.region = {format_value(s.region)}")
        lines.append(f"shock.{i}.kind = {format_value(s.kind)}")
        lines.append(f"shock.{i}.magnitude = {format_value(s.magnitude)}")
    if config.sweep is not None:
        lines.append(f"sweep.thetas = {format_value(list(config.sweep.thetas))}")
        lines.append(f"sweep.replications = {config.sweep.replications}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Subjective reweighting of frequency tables
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbabilityTable:
    entries: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        if any(f < 0 or not math.isfinite(f) for _, f in self.entries):
            raise ValueError("frequencies must be finite and non-negative")

    @classmethod
    def from_pairs(cls, pairs) -> ProbabilityTable:
        return cls(tuple((str(k), float(v)) for k, v in pairs))

    @property
    def labels(self) -> list[str]:
        return [k for k, _ in self.entries]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.entries]

    def normalized(self) -> ProbabilityTable:
        total = math.fsum(self.values)
        if total <= 0:
            raise AllMassExcluded("table has no mass to normalise")
        return ProbabilityTable(tuple((k, v / total) for k, v in self.entries))


def subjective_reweight(table: ProbabilityTable, compensation: Sequence[float]) -> ProbabilityTable:
    """Multiply observed frequencies by compensation weights and renormalise.

    Use it when raw frequencies are known to be distorted by a past context
    that no longer applies: a weight of 0 removes a class, 1 keeps it as
    observed.
    """
    if len(compensation) != len(table.entries):
        raise LengthMismatch(f"{len(compensation)} weights for {len(table.entries)} entries")
    if any(w < 0 or not math.isfinite(w) for w in compensation):
        raise ValueError("compensation weights must be finite and non-negative")
    products = [f * w for f, w in zip(table.values, compensation)]
    total = math.fsum(products)
    if total <= 0:
        raise AllMassExcluded("every frequency-weight product is zero")
    return ProbabilityTable(tuple((k, p / total) for k, p in zip(table.labels, products)))
