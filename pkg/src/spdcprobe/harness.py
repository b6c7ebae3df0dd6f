"""Scenario definitions, sweep execution and result serialization."""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .probe import EvolutionSpec, PolarizationPrep, TraceDistanceCurve, compute_curve
from .spdc import (
    AngularGrid,
    JointDistribution,
    PhysicalConfig,
    angular_correlation,
    angular_kernel,
    check_grid,
    joint_from_density,
)

CURVE_HEADER = ("beta", "eps_1", "eps_2", "D_closed", "D_eig")
SUMMARY_HEADER = ("scenario", "C2", "purity_E2", "D0", "Dmax", "delta_D_max")
FORMATS = ("csv", "json", "svg")

BASELINE_PREP1 = PolarizationPrep(math.pi / 4, 0.91)
BASELINE_PREP2 = PolarizationPrep(math.pi / 4, 0.96)
BASELINE_ENV1 = PhysicalConfig(spectral_width_nm=45.0, pump_dk_fwhm_inv_mm=18.0)
BASELINE_ENV2 = PhysicalConfig(spectral_width_nm=10.0, pump_dk_fwhm_inv_mm=18.0)


@dataclass(frozen=True)
class Scenario:
    id: str
    prep1: PolarizationPrep = BASELINE_PREP1
    prep2: PolarizationPrep = BASELINE_PREP2
    env1: PhysicalConfig = BASELINE_ENV1
    env2: PhysicalConfig = BASELINE_ENV2
    grid: AngularGrid = field(default_factory=AngularGrid)
    # None: linear grid up to six inverse widths of the narrower delta marginal
    evolution: EvolutionSpec | None = None
    n_beta: int = 401
    # off-diagonal-only phase on the second environment (probability unchanged)
    phase_scramble2: float = 0.0


@dataclass(frozen=True)
class Environment:
    jd: JointDistribution
    correlation: float
    purity: float


@lru_cache(maxsize=64)
def environment(cfg: PhysicalConfig, grid: AngularGrid, phase_scramble: float = 0.0) -> Environment:
    kernel = angular_kernel(cfg, grid, phase_scramble)
    check_grid(kernel)
    jd = joint_from_density(grid, kernel.diagonal())
    return Environment(jd, angular_correlation(jd), kernel.purity())


@dataclass(frozen=True, eq=False)
class SweepResult:
    scenario_id: str
    curve: TraceDistanceCurve
    d0: float
    dmax: float
    delta_d_max: float
    c2: float
    purity_e2: float

    @classmethod
    def from_curve(cls, scenario_id: str, curve: TraceDistanceCurve) -> "SweepResult":
        d = curve.d_closed
        d0 = float(d[0])
        dmax = float(np.max(d))
        return cls(
            scenario_id,
            curve,
            d0,
            dmax,
            dmax - d0,
            float(curve.meta["C2"]),
            float(curve.meta["purity_E2"]),
        )

    def summary_row(self) -> tuple:
        return (self.scenario_id, self.c2, self.purity_e2, self.d0, self.dmax, self.delta_d_max)


def _fmt_id(x: float) -> str:
    return f"{x:.4g}"


def builtin_scenarios(family: str, grid: AngularGrid | None = None) -> list[Scenario]:
    """The three scenarios of one built-in family: ``fig3a`` .. ``fig3d``."""
    grid = grid or AngularGrid()
    if family == "fig3a":
        return [
            Scenario(f"fig3a-gamma2-{_fmt_id(g)}", prep2=PolarizationPrep(math.pi / 4, g), grid=grid)
            for g in (0.96, 0.73, 0.52)
        ]
    if family == "fig3b":
        return [
            Scenario(f"fig3b-alpha2-{_fmt_id(a)}", prep2=PolarizationPrep(a, 0.96), grid=grid)
            for a in (math.pi / 4, 0.675, 0.575)
        ]
    if family == "fig3c":
        return [
            Scenario(
                f"fig3c-dk2-{_fmt_id(dk)}",
                env2=dataclasses.replace(BASELINE_ENV2, pump_dk_fwhm_inv_mm=dk),
                grid=grid,
            )
            for dk in (18.0, 24.0, 29.0)
        ]
    if family == "fig3d":
        return [
            Scenario(
                f"fig3d-dl2-{_fmt_id(dl)}",
                env2=dataclasses.replace(BASELINE_ENV2, spectral_width_nm=dl),
                grid=grid,
            )
            for dl in (10.0, 20.0, 30.0)
        ]
    raise ValueError(f"unknown scenario family {family!r}")


def figure4_variants() -> list[PhysicalConfig]:
    """Pump-divergence and spectral-width variants of the second environment."""
    by_dk = [dataclasses.replace(BASELINE_ENV2, pump_dk_fwhm_inv_mm=dk) for dk in (18.0, 24.0, 29.0)]
    by_dl = [dataclasses.replace(BASELINE_ENV2, spectral_width_nm=dl) for dl in (10.0, 20.0, 30.0)]
    return by_dk + by_dl


def _env_dict(cfg: PhysicalConfig) -> dict:
    return dataclasses.asdict(cfg)


def run_scenario(s: Scenario) -> SweepResult:
    e1 = environment(s.env1, s.grid)
    e2 = environment(s.env2, s.grid, s.phase_scramble2)
    spec = s.evolution or EvolutionSpec.default_for(e1.jd, e2.jd, n=s.n_beta)
    meta = {
        "scenario": s.id,
        "prep1": dataclasses.asdict(s.prep1),
        "prep2": dataclasses.asdict(s.prep2),
        "env1": _env_dict(s.env1),
        "env2": _env_dict(s.env2),
        "grid": dataclasses.asdict(s.grid),
        "phase_scramble2": s.phase_scramble2,
        "C1": e1.correlation,
        "C2": e2.correlation,
        "purity_E1": e1.purity,
        "purity_E2": e2.purity,
    }
    curve = compute_curve(spec, s.prep1, e1.jd, s.prep2, e2.jd, meta)
    return SweepResult.from_curve(s.id, curve)


def thread_count() -> int:
    raw = os.environ.get("SPDCPROBE_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("SPDCPROBE_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def run_scenarios(scenarios, threads: int | None = None) -> list[SweepResult]:
    """Run independent scenarios, possibly in parallel; results sorted by id."""
    scenarios = list(scenarios)
    ids = [s.id for s in scenarios]
    if len(set(ids)) != len(ids):
        raise ValueError("scenario ids must be unique within a run")
    threads = threads or thread_count()
    if threads == 1 or len(scenarios) <= 1:
        results = [run_scenario(s) for s in scenarios]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_scenario, scenarios))
    return sorted(results, key=lambda r: r.scenario_id)


def figure4_dataset(base: Scenario, variants) -> list[SweepResult]:
    """One result per ``env2`` variant, ordered by ``|C2|``."""
    variants = list(variants)
    if not variants:
        raise ValueError("variants must be nonempty")
    scenarios = [
        dataclasses.replace(
            base,
            id=f"{base.id}-{i:02d}-dk{_fmt_id(v.pump_dk_fwhm_inv_mm)}-dl{_fmt_id(v.spectral_width_nm)}",
            env2=v,
        )
        for i, v in enumerate(variants)
    ]
    results = run_scenarios(scenarios)
    return sorted(results, key=lambda r: (abs(r.c2), r.scenario_id))


# -- serialization -----------------------------------------------------------


def _curve_rows(result: SweepResult):
    return [[repr(x) for x in rec] for rec in result.curve.records()]


def _write_csv(results, out: Path) -> list[Path]:
    paths = []
    for r in results:
        p = out / f"{r.scenario_id}.csv"
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CURVE_HEADER)
            w.writerows(_curve_rows(r))
        paths.append(p)
    p = out / "summary.csv"
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for r in results:
            row = r.summary_row()
            w.writerow([row[0]] + [repr(float(x)) for x in row[1:]])
    paths.append(p)
    return paths


def result_to_json(r: SweepResult) -> dict:
    return {
        "scenario": r.scenario_id,
        "meta": r.curve.meta,
        "summary": dict(zip(SUMMARY_HEADER[1:], r.summary_row()[1:])),
        "records": [dict(zip(CURVE_HEADER, rec)) for rec in r.curve.records()],
    }


def result_from_json(doc: dict) -> SweepResult:
    recs = doc["records"]
    cols = [np.array([rec[k] for rec in recs], dtype=float) for k in CURVE_HEADER]
    curve = TraceDistanceCurve(*cols, meta=doc["meta"])
    s = doc["summary"]
    return SweepResult(
        doc["scenario"], curve, s["D0"], s["Dmax"], s["delta_D_max"], s["C2"], s["purity_E2"]
    )


def _write_json(results, out: Path) -> list[Path]:
    paths = []
    for r in results:
        p = out / f"{r.scenario_id}.json"
        p.write_text(json.dumps(result_to_json(r), indent=1) + "\n")
        paths.append(p)
    p = out / "summary.json"
    summary = [dict(zip(SUMMARY_HEADER, r.summary_row())) for r in results]
    p.write_text(json.dumps(summary, indent=1) + "\n")
    paths.append(p)
    return paths


def load_json_results(directory) -> list[SweepResult]:
    """Read back every ``<scenario>.json`` listed in ``summary.json``."""
    d = Path(directory)
    summary = json.loads((d / "summary.json").read_text())
    return [result_from_json(json.loads((d / f"{row['scenario']}.json").read_text())) for row in summary]


def write_outputs(results, format: str, path) -> list[Path]:
    """Write per-scenario files plus a summary into directory ``path``."""
    if format not in FORMATS:
        raise ValueError(f"unknown output format {format!r}; choose from {FORMATS}")
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    results = sorted(results, key=lambda r: r.scenario_id)
    if format == "csv":
        return _write_csv(results, out)
    if format == "json":
        return _write_json(results, out)
    from . import plotting

    paths = [plotting.plot_curve(r, out / f"{r.scenario_id}.svg") for r in results]
    paths.append(plotting.plot_curves(results, out / "summary.svg"))
    return paths
