"""
Figures for run and sweep reports.

Rendered with the Agg backend into PNG files next to the CSV output. PNG
metadata is stripped so that the bytes depend only on the data and the
installed matplotlib.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .montecarlo import RunReport, SweepReport  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}
PNG_METADATA = {"Software": None}


def _save(fig, path: Path, dpi: int) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=dpi, metadata=PNG_METADATA)
    plt.close(fig)
    return path


def plot_run(report: RunReport, path: Path | str, dpi: int = 100) -> Path:
    """
    Productivity (log scale) and population trajectories, one line per region.

    Parameters
    ----------
    report : RunReport
        finished run
    path : path-like
        PNG file to write
    dpi : int
        output resolution
    """
    with mpl.rc_context(RC):
        fig, (ax_p, ax_n) = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
        steps = list(range(report.horizon + 1))
        for region in report.regions:
            ax_p.plot(steps, report.productivity_trace(region), label=region, lw=1.2)
            ax_n.plot(steps, report.population_trace(region), label=region, lw=1.2)
        ax_p.set_yscale("log")
        ax_p.set_ylabel("share-weighted productivity")
        ax_n.set_ylabel("population")
        ax_n.set_xlabel("step")
        ax_p.legend(frameon=False)
        ax_p.set_title(f"{report.name} (seed {report.seed})", fontsize=9)
        fig.tight_layout()
        return _save(fig, Path(path), dpi)


def plot_sweep(sweep: SweepReport, path: Path | str, dpi: int = 100) -> Path:
    """Mean pace of evolution (with one standard deviation) and mean mutations against theta."""
    thetas = sweep.thetas
    pace = [r.mean_pace for r in sweep.rows]
    sd = [r.sd_pace for r in sweep.rows]
    muts = [r.mean_mutations for r in sweep.rows]
    with mpl.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6.0, 3.6))
        ax.errorbar(thetas, pace, yerr=sd, marker="o", ms=4, lw=1.2, capsize=3, color="C0")
        ax.set_xlabel("consent threshold")
        ax.set_ylabel("mean pace of evolution", color="C0")
        ax2 = ax.twinx()
        ax2.spines["right"].set_visible(True)
        ax2.plot(thetas, muts, marker="s", ms=4, lw=1.0, ls="--", color="C1")
        ax2.set_ylabel("mean mutations per run", color="C1")
        rho = "n/a" if sweep.correlation is None else f"{sweep.correlation:.3f}"
        ax.set_title(f"{sweep.name}: {sweep.rows[0].replications} reps per theta, Spearman {rho}", fontsize=9)
        fig.tight_layout()
        return _save(fig, Path(path), dpi)
