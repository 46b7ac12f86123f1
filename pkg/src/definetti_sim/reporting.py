"""Delimited and structured-text output for runs and sweeps.

Numbers are written in shortest round-trip form (``repr``), lines end with
``\\n``, and nothing depends on the locale, so output files are
byte-identical for identical inputs.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .montecarlo import RegionSummary, RunReport, StepRecord, SweepReport
from .scenario import format_value, tokenize

REPORT_HEADER = "# definetti-sim run report v1"
RUN_COLUMNS = ("step", "region", "mutations", "productivity", "avg_profit_rate", "population")
SWEEP_COLUMNS = ("theta", "reps", "mean_mutations", "mean_pace", "sd_pace")
STEP_FIELDS = (
    "mutations",
    "productivity",
    "avg_profit_rate",
    "population",
    "candidates",
    "top_count",
    "entrants",
    "technologies",
)
SUMMARY_FIELDS = ("pace", "total_mutations", "final_population", "rd_spend")


def _num(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def run_csv(report: RunReport) -> str:
    return _csv(
        ([_num(getattr(r, c)) if c != "region" else r.region for c in RUN_COLUMNS] for r in report.records),
        RUN_COLUMNS,
    )


def sweep_csv(sweep: SweepReport) -> str:
    return _csv(
        ([str(r.theta), str(r.replications), _num(r.mean_mutations), _num(r.mean_pace), _num(r.sd_pace)]
         for r in sweep.rows),
        SWEEP_COLUMNS,
    )


def sweep_summary(sweep: SweepReport) -> str:
    rho = "absent" if sweep.correlation is None else _num(sweep.correlation)
    return (
        f"name = {format_value(sweep.name)}\n"
        f"base_seed = {sweep.base_seed}\n"
        f"thetas = {format_value(sweep.thetas)}\n"
        f"replications = {sweep.rows[0].replications}\n"
        f"spearman_theta_mean_pace = {rho}\n"
    )


def render_report(report: RunReport) -> str:
    """The report document: one ``key = value`` line per field of the report."""
    report.verify()
    lines = [
        REPORT_HEADER,
        f"report.name = {format_value(report.name)}",
        f"report.seed = {report.seed}",
        f"report.stream = {format_value(list(report.stream))}",
        f"report.horizon = {report.horizon}",
    ]
    for i, region in enumerate(report.regions):
        lines.append(f"region.{i}.name = {format_value(region)}")
        lines.append(f"region.{i}.initial_productivity = {_num(report.initial_productivity[i])}")
        lines.append(f"region.{i}.initial_population = {_num(report.initial_population[i])}")
    index = {r: i for i, r in enumerate(report.regions)}
    for rec in report.records:
        i = index[rec.region]
        for f in STEP_FIELDS:
            lines.append(f"step.{rec.step}.region.{i}.{f} = {_num(getattr(rec, f))}")
    for i, s in enumerate(report.summary):
        for f in SUMMARY_FIELDS:
            lines.append(f"summary.region.{i}.{f} = {_num(getattr(s, f))}")
    lines.append(f"summary.total_mutations = {report.total_mutations}")
    lines.append(f"summary.mean_pace = {_num(report.mean_pace)}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> RunReport:
    """Inverse of :func:`render_report`; the result is verified before return."""
    kv = {a.path: a.value for a in tokenize(text)}
    n = 0
    while f"region.{n}.name" in kv:
        n += 1
    regions = tuple(kv[f"region.{i}.name"] for i in range(n))
    horizon = kv["report.horizon"]
    records = []
    for t in range(1, horizon + 1):
        for i, region in enumerate(regions):
            vals = {f: kv[f"step.{t}.region.{i}.{f}"] for f in STEP_FIELDS}
            for f in ("productivity", "avg_profit_rate", "population"):
                vals[f] = float(vals[f])
            records.append(StepRecord(step=t, region=region, **vals))
    summary = tuple(
        RegionSummary(
            region,
            float(kv[f"summary.region.{i}.pace"]),
            kv[f"summary.region.{i}.total_mutations"],
            float(kv[f"summary.region.{i}.final_population"]),
            float(kv[f"summary.region.{i}.rd_spend"]),
        )
        for i, region in enumerate(regions)
    )
    report = RunReport(
        name=kv["report.name"],
        seed=kv["report.seed"],
        stream=tuple(kv["report.stream"]),
        horizon=horizon,
        regions=regions,
        initial_productivity=tuple(float(kv[f"region.{i}.initial_productivity"]) for i in range(n)),
        initial_population=tuple(float(kv[f"region.{i}.initial_population"]) for i in range(n)),
        records=tuple(records),
        summary=summary,
    )
    report.verify()
    return report


def summary_line(report: RunReport) -> str:
    return (
        f"name={report.name} seed={report.seed} horizon={report.horizon} "
        f"total_mutations={report.total_mutations} mean_pace={_num(report.mean_pace)} "
        f"final_population={_num(report.final_population)}"
    )


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
