"""Study orchestration: natural-frequency sweeps, contour grids, transients, seed studies."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, ce, metrics, road
from .config import StudyConfig
from .io import write_columns, write_json
from .objective import Evaluation, evaluate, make_objective
from .simulation import SimResult, disturbance_end, simulate_transient

log = logging.getLogger(__name__)


def provenance(study: StudyConfig, **extra) -> dict:
    import numba
    import scipy

    return {
        "package": "suspopt",
        "version": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
        "config": study.to_dict(),
        **extra,
    }


def _pool_map(func, items, workers: int):
    if workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


@dataclass
class SweepCell:
    f_n: float
    preset: str
    seed: int
    zeta_n: float = math.nan
    zeta_p: float = math.nan
    J: float = math.nan
    sigma_aw: float = math.nan
    r_ft: float = math.nan
    t_s: float = math.nan
    settled: bool = False
    iterations: int = 0
    reason: str = ""
    error: str = ""
    trace: dict | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return not self.error


@dataclass
class StudyResult:
    cells: list[SweepCell]
    provenance: dict

    @property
    def failed(self) -> list[SweepCell]:
        return [c for c in self.cells if not c.ok]

    def columns(self) -> dict[str, list]:
        keys = ["f_n", "preset", "seed", "zeta_n", "zeta_p", "J", "sigma_aw", "r_ft", "t_s",
                "settled", "iterations", "reason", "error"]
        return {k: [getattr(c, k) for c in self.cells] for k in keys}


def optimize_cell(study: StudyConfig, f_n: float, preset: str, seed: int | None = None) -> SweepCell:
    """One CE run over ``(zeta_n, zeta_p)`` plus the metrics at its optimum."""
    seed = study.seed if seed is None else seed
    cell = SweepCell(f_n=f_n, preset=preset, seed=seed)
    try:
        scenario = study.scenario(f_n=f_n, seed=seed)
        objective = study.objective(preset)
        res = ce.optimize(make_objective(scenario, objective), study.ce_config(seed=seed))
        ev = evaluate(res.x_best, scenario, objective, settling=True)
    except Exception as exc:  # noqa: BLE001 - recorded per cell, the sweep carries on
        log.error("cell f_n=%s preset=%s failed: %s", f_n, preset, exc)
        cell.error = f"{type(exc).__name__}: {exc}"
        return cell
    cell.zeta_n, cell.zeta_p = (float(v) for v in res.x_best)
    cell.J, cell.sigma_aw, cell.r_ft = ev.J, ev.sigma_aw, ev.r_ft
    cell.t_s, cell.settled = ev.t_s, bool(ev.settled)
    cell.iterations, cell.reason = res.iterations, res.reason
    cell.trace = res.trace_columns()
    return cell


def run_optimization_sweep(study: StudyConfig, seed: int | None = None) -> StudyResult:
    seed = study.seed if seed is None else seed
    jobs = [(f, p) for f in study.fn_grid for p in study.presets]
    cells = _pool_map(lambda job: optimize_cell(study, job[0], job[1], seed), jobs, study.workers)
    return StudyResult(cells=cells, provenance=provenance(study, seed=seed, kind="sweep"))


@dataclass
class ContourGrid:
    f_n: float
    zeta_n: np.ndarray  # axis, length n
    zeta_p: np.ndarray
    sigma_aw: np.ndarray  # (n, n), indexed [i_zeta_n, j_zeta_p]
    r_ft: np.ndarray
    t_s: np.ndarray
    settled: np.ndarray
    provenance: dict

    def columns(self) -> dict[str, np.ndarray]:
        zn, zp = np.meshgrid(self.zeta_n, self.zeta_p, indexing="ij")
        return {
            "zeta_n": zn.ravel(), "zeta_p": zp.ravel(),
            "sigma_aw": self.sigma_aw.ravel(), "r_ft": self.r_ft.ravel(),
            "t_s": self.t_s.ravel(), "settled": self.settled.ravel(),
        }

    def argmin(self, values: np.ndarray) -> tuple[float, float]:
        i, j = np.unravel_index(np.nanargmin(values), values.shape)
        return float(self.zeta_n[i]), float(self.zeta_p[j])


def run_contour_grid(
    study: StudyConfig, f_n: float | None = None, resolution: int | None = None, settling: bool = True
) -> ContourGrid:
    """Metrics on a full ``(zeta_n, zeta_p)`` grid at fixed natural frequency.

    Cells whose simulation fails hold NaN.
    """
    f_n = study.fn if f_n is None else f_n
    n = int(study.data["contour"]["resolution"] if resolution is None else resolution)
    if n < 11:
        raise ValueError("contour resolution must be at least 11")
    axis = np.linspace(0.0, 1.0, n)
    scenario = study.scenario(f_n=f_n)
    objective = study.objective("min_sigma")

    def cell(ij):
        i, j = ij
        try:
            return evaluate((axis[i], axis[j]), scenario, objective, settling=settling)
        except Exception as exc:  # noqa: BLE001
            log.error("contour cell (%d, %d) failed: %s", i, j, exc)
            return Evaluation(math.nan, math.nan, math.nan, math.nan, False)

    idx = [(i, j) for i in range(n) for j in range(n)]
    evals = _pool_map(cell, idx, study.workers)
    shape = (n, n)
    return ContourGrid(
        f_n=f_n, zeta_n=axis, zeta_p=axis.copy(),
        sigma_aw=np.array([e.sigma_aw for e in evals]).reshape(shape),
        r_ft=np.array([e.r_ft for e in evals]).reshape(shape),
        t_s=np.array([e.t_s for e in evals]).reshape(shape),
        settled=np.array([bool(e.settled) for e in evals]).reshape(shape),
        provenance=provenance(study, kind="contour", f_n=f_n, resolution=n),
    )


@dataclass
class TransientRun:
    label: str
    zeta_n: float
    zeta_p: float
    result: SimResult
    settling: metrics.Settling

    @property
    def peak_rebound_travel(self) -> float:
        """Largest extension of the suspension beyond its static value [m]."""
        travel = self.result.wheel_travel
        return float(np.max(travel - travel[0]))


def run_transient_comparison(study: StudyConfig, designs, excitation=None, f_n: float | None = None):
    """Bump (or step) response for each ``(zeta_n, zeta_p)`` in ``designs``."""
    designs = [tuple(float(v) for v in d) for d in designs]
    if not designs:
        raise ValueError("need at least one design")
    excitation = study.transient_input() if excitation is None else excitation
    scenario = study.scenario(f_n=f_n)
    speed = scenario.transient_speed
    t_end = disturbance_end(excitation, speed)

    def one(k):
        zn, zp = designs[k]
        design = scenario.design((zn, zp))
        res = simulate_transient(scenario.params, design, excitation, scenario.sim, speed=speed)
        st = metrics.settling_time(res.x_s, res.t, t_end, band=scenario.settle_band)
        return TransientRun(f"d{k}_zn{zn:g}_zp{zp:g}", zn, zp, res, st)

    return _pool_map(one, range(len(designs)), study.workers)


@dataclass
class RealizationSummary:
    per_seed: list[StudyResult]
    summary: list[dict]
    provenance: dict


SUMMARY_FIELDS = ("zeta_n", "zeta_p", "sigma_aw", "r_ft", "t_s")


def run_realization_study(study: StudyConfig, n_seeds: int | None = None) -> RealizationSummary:
    """Repeat the sweep for seeds ``seed, seed + 1, ...`` and summarize the optima.

    With a single seed the dispersion entries are ``None``.
    """
    n_seeds = int(study.data["realizations"]["n_seeds"] if n_seeds is None else n_seeds)
    if n_seeds < 1:
        raise ValueError("n_seeds must be at least 1")
    seeds = [study.seed + k for k in range(n_seeds)]
    runs = [run_optimization_sweep(study, seed=s) for s in seeds]
    summary = []
    for f_n in study.fn_grid:
        for preset in study.presets:
            cells = [c for r in runs for c in r.cells if c.f_n == f_n and c.preset == preset and c.ok]
            row = {"f_n": f_n, "preset": preset, "n": len(cells)}
            for k in SUMMARY_FIELDS:
                vals = np.array([getattr(c, k) for c in cells], dtype=float)
                row[f"{k}_mean"] = float(vals.mean()) if vals.size else None
                row[f"{k}_std"] = float(vals.std(ddof=1)) if vals.size > 1 else None
            summary.append(row)
    return RealizationSummary(runs, summary, provenance(study, kind="realizations", seeds=seeds))


# -- persistence ----------------------------------------------------------


def write_sweep(result: StudyResult, out_dir) -> list[Path]:
    out = Path(out_dir)
    files = [write_columns(out / "sweep.csv", result.columns(), result.provenance)]
    for c in result.cells:
        if c.trace is not None:
            name = f"trace_fn{c.f_n:g}_{c.preset}_seed{c.seed}.csv"
            files.append(write_columns(out / "traces" / name, c.trace, result.provenance))
    files.append(write_json(out / "summary.json", {
        "provenance": result.provenance,
        "cells": [{k: v for k, v in vars(c).items() if k != "trace"} for c in result.cells],
        "failed": len(result.failed),
    }))
    return files


def write_contour(grid: ContourGrid, out_dir) -> list[Path]:
    out = Path(out_dir)
    path = write_columns(out / f"contour_fn{grid.f_n:g}.csv", grid.columns(), grid.provenance)
    summary = {
        "provenance": grid.provenance,
        "argmin_sigma_aw": grid.argmin(grid.sigma_aw),
        "argmin_r_ft": grid.argmin(grid.r_ft),
        "missing_cells": int(np.isnan(grid.sigma_aw).sum()),
    }
    return [path, write_json(out / "summary.json", summary)]


def write_transients(runs: list[TransientRun], out_dir, prov: dict) -> list[Path]:
    out = Path(out_dir)
    files = []
    for run in runs:
        cols = {"t": run.result.t, "x_s": run.result.x_s, "wheel_travel": run.result.wheel_travel,
                "x_u": run.result.x_u, "a_s": run.result.a_s, "f_t": run.result.f_t, "y": run.result.y}
        files.append(write_columns(out / f"transient_{run.label}.csv", cols, prov))
    files.append(write_json(out / "summary.json", {
        "provenance": prov,
        "designs": [
            {"label": r.label, "zeta_n": r.zeta_n, "zeta_p": r.zeta_p, "t_s": r.settling.time,
             "settled": r.settling.settled, "peak_rebound_travel": r.peak_rebound_travel}
            for r in runs
        ],
    }))
    return files


def write_realizations(res: RealizationSummary, out_dir) -> list[Path]:
    out = Path(out_dir)
    rows = [c for r in res.per_seed for c in r.cells]
    keys = ["seed", "f_n", "preset", "zeta_n", "zeta_p", "J", "sigma_aw", "r_ft", "t_s", "settled", "error"]
    files = [write_columns(out / "realizations.csv", {k: [getattr(c, k) for c in rows] for k in keys},
                           res.provenance)]
    files.append(write_json(out / "summary.json", {"provenance": res.provenance, "summary": res.summary}))
    return files
