"""Reproduction datasets: the CSV files behind the three benchmark figures.

fig2a.csv          long-format trajectories (eps, t, x) of example1/v1
fig2b_v1.csv       sweep records for example1/v1
fig2b_v2.csv       sweep records for example1/v2
fig2c.csv          sweep records for example2/veps
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, List

from .registry import get_suite
from .sweep import (SweepRecord, run_sweep, run_trajectory_family,
                    soundness_violations, write_sweep_csv,
                    write_trajectory_long_csv)

FIGURES = ("2a", "2b", "2c")

# Representative log-spaced subset of eps = 1/n, n = 1..20000 (the
# qualitative non-convergence is the claim, not 20000 curves).
FIG2A_EPS = [1.0, 1.0 / 3, 1.0 / 10, 1.0 / 30, 1.0 / 100, 1.0 / 300,
             1.0 / 1000, 1.0 / 5000, 1.0 / 20000]


class SoundnessViolationError(RuntimeError):
    """A sweep record exceeded its theoretical bound."""


def reproduce_figure(figure: str, out_dir, steps: int = 10_000,
                     check_soundness: bool = True) -> List[Path]:
    """Emit the CSV inputs for one figure; returns the files written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    if figure == "2a":
        suite = get_suite("example1")
        results = run_trajectory_family(suite, "v1", FIG2A_EPS, steps=steps)
        path = out / "fig2a.csv"
        write_trajectory_long_csv(results, path)
        written.append(path)
        return written

    if figure == "2b":
        suite = get_suite("example1")
        all_records: List[SweepRecord] = []
        for family in ("v1", "v2"):
            records = run_sweep(suite, family, suite.default_eps[family],
                                steps=steps)
            path = out / f"fig2b_{family}.csv"
            write_sweep_csv(records, path)
            written.append(path)
            all_records.extend(records)
        _raise_on_problems(all_records, check_soundness)
        return written

    if figure == "2c":
        suite = get_suite("example2")
        records = run_sweep(suite, "veps", suite.default_eps["veps"],
                            steps=steps)
        path = out / "fig2c.csv"
        write_sweep_csv(records, path)
        written.append(path)
        _raise_on_problems(records, check_soundness)
        return written

    raise ValueError(f"unknown figure {figure!r}; expected one of {FIGURES}")


def _raise_on_problems(records: List[SweepRecord], check_soundness: bool) -> None:
    failed = [r for r in records if r.error]
    if failed:
        raise RuntimeError("; ".join(f"eps={r.eps:g}: {r.error}" for r in failed))
    if check_soundness:
        violations = soundness_violations(records)
        if violations:
            raise SoundnessViolationError("; ".join(violations))
