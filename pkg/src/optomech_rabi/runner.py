"""Run a configuration end to end and write CSV output; parameter sweeps."""

from __future__ import annotations

import csv
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analytic
from .config import RunConfig, format_config
from .engine import TimeSeries, integrate
from .errors import DegenerateCoupling, OptomechError, UnknownKey, UnstableIntegration, ValidationError
from .hilbert import PARAM_FIELDS, initial_state

log = logging.getLogger(__name__)

CSV_HEADER = ("t", "delta_p_num", "delta_p_eq8", "delta_p_eq9", "n_b", "n_c",
              "trace_error", "min_eig")


def fmt(x) -> str:
    """At most 12 significant digits, no trailing zeros; '' for missing values."""
    if x is None:
        return ""
    return f"{float(x):.12g}"


@dataclass
class RunResult:
    config: RunConfig
    series: TimeSeries
    eq8: np.ndarray | None
    eq9: np.ndarray | None
    csv_path: Path | None = None

    @property
    def max_dev_eq8(self) -> float | None:
        return None if self.eq8 is None else float(np.max(np.abs(self.series.delta_p - self.eq8)))

    @property
    def max_dev_eq9(self) -> float | None:
        return None if self.eq9 is None else float(np.max(np.abs(self.series.delta_p - self.eq9)))


def analytic_columns(cfg: RunConfig, t: np.ndarray):
    """General and resonant three-level predictions on ``t`` (None when off or undefined)."""
    p = cfg.params()
    eq8 = eq9 = None
    if cfg.emit_eq8:
        try:
            eq8 = analytic.delta_p_general(t, p)
        except DegenerateCoupling:
            log.info("g_cm = 0: general analytic column left empty")
    if cfg.emit_eq9:
        eq9 = analytic.delta_p_resonant(t, p)
    return eq8, eq9


def write_csv(path, series: TimeSeries, eq8=None, eq9=None) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for i in range(len(series)):
            row = (series.t[i], series.delta_p[i],
                   None if eq8 is None else eq8[i],
                   None if eq9 is None else eq9[i],
                   series.n_b[i], series.n_c[i], series.trace_error[i], series.min_eig[i])
            fh.write(",".join(fmt(v) for v in row) + "\n")


def simulate(cfg: RunConfig) -> RunResult:
    """Integrate ``cfg`` without touching the filesystem."""
    p = cfg.params()
    series = integrate(initial_state(p), cfg.evolution_spec(), eigensolver=cfg.eigensolver)
    eq8, eq9 = analytic_columns(cfg, series.t)
    return RunResult(cfg, series, eq8, eq9)


def run(cfg: RunConfig, out_dir=None) -> RunResult:
    """Integrate ``cfg`` and write ``<name>.csv`` plus the resolved ``<name>.conf``.

    On UnstableIntegration the partial series is still written before the
    exception propagates.
    """
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{cfg.name}.csv"
    (out / f"{cfg.name}.conf").write_text(
        format_config(cfg, header=f"resolved configuration for {cfg.name}.csv"), encoding="utf-8")
    try:
        result = simulate(cfg)
    except UnstableIntegration as exc:
        if exc.series is not None:
            eq8, eq9 = analytic_columns(cfg, exc.series.t)
            write_csv(csv_path, exc.series, eq8, eq9)
        raise
    write_csv(csv_path, result.series, result.eq8, result.eq9)
    result.csv_path = csv_path
    log.info("wrote %s (%d samples)", csv_path, len(result.series))
    return result


SUMMARY_HEADER = ("value", "max_abs_dev_eq8", "max_abs_dev_eq9", "max_n_b", "status")


@dataclass
class SweepRow:
    value: float
    max_dev_eq8: float | None
    max_dev_eq9: float | None
    max_n_b: float | None
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _sweep_one(args):
    cfg, out_dir = args
    try:
        result = run(cfg, out_dir)
    except OptomechError as exc:
        return None, None, None, f"failed: {exc}"
    return result.max_dev_eq8, result.max_dev_eq9, float(np.max(result.series.n_b)), "ok"


def _value_label(value) -> str:
    return fmt(value).replace("-", "m")


def sweep(base: RunConfig, key: str, values, out_dir, jobs: int = 1) -> list[SweepRow]:
    """One independent run per value of ``key``; writes each CSV and ``summary.csv``.

    Failed runs are recorded in the summary instead of aborting the sweep.
    """
    if key not in PARAM_FIELDS:
        raise UnknownKey(f"{key}: not a system parameter (choose from {', '.join(PARAM_FIELDS)})")
    values = list(values)
    if not values:
        raise ValidationError("values: the sweep needs at least one value")
    configs = []
    for v in values:
        v = int(v) if key in ("d_c", "d_m") else float(v)
        try:
            configs.append(base.with_(**{key: v, "name": f"{base.name}_{key}_{_value_label(v)}"}))
        except (ValidationError, ValueError) as exc:
            raise ValidationError(f"{key}={v!r}: {exc}") from exc
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(cfg, out) for cfg in configs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks), os.cpu_count() or 1)) as pool:
            outcomes = list(pool.map(_sweep_one, tasks))
    else:
        outcomes = [_sweep_one(t) for t in tasks]
    rows = [SweepRow(getattr(cfg, key), *o) for cfg, o in zip(configs, outcomes)]
    with open(out / "summary.csv", "w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for r in rows:
            writer.writerow([fmt(r.value), fmt(r.max_dev_eq8), fmt(r.max_dev_eq9),
                             fmt(r.max_n_b), r.status])
    return rows
