#!/usr/bin/env python3
"""Bisect the industrial-transition base birth rate onto the 1900-2000 world population multiple.

Prints the value to commit as ``INDUSTRIAL_BASE_BIRTH`` in presets.py and the
multiple the committed preset currently reaches.
"""

from __future__ import annotations

import argparse

from definetti_sim.demographics import CENTURY_RATIO, WORLD_1900, calibrate_base_birth
from definetti_sim.montecarlo import run_once
from definetti_sim.presets import industrial_demographics, preset


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--target", type=float, default=CENTURY_RATIO)
    parser.add_argument("--steps", type=int, default=100)
    args = parser.parse_args()

    found = calibrate_base_birth(industrial_demographics(), args.target, args.steps, WORLD_1900)
    print(f"INDUSTRIAL_BASE_BIRTH = {found.base_birth!r}")

    report = run_once(preset("industrial-transition"))
    trace = report.population_trace("world")
    print(f"committed preset: {trace[0]:.1f} -> {trace[-1]:.1f} ({trace[-1] / trace[0]:.4f}x, target {args.target:.4f}x)")


if __name__ == "__main__":
    main()
