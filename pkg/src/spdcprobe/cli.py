"""Command-line entry point: ``spdcprobe {simulate,figure,sweep,validate}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import harness, plotting
from .errors import SpdcProbeError
from .probe import EvolutionSpec, PolarizationPrep
from .spdc import AngularGrid, PhysicalConfig
from .validation import run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ProbeModel(_Model):
    alpha_rad: float = Field(math.pi / 4, ge=0.0, le=math.pi / 2)
    gamma: float = Field(1.0, ge=0.0, le=1.0)


class EnvModel(_Model):
    pump_wavelength_nm: float = Field(405.0, gt=0)
    theta0_deg: float = Field(3.0, gt=0)
    crystal_length_mm: float = Field(1.0, gt=0)
    pump_dk_fwhm_inv_mm: float = Field(18.0, gt=0)
    spectral_width_nm: float = Field(10.0, gt=0)
    signal_center_wavelength_nm: float = Field(810.0, gt=0)

    @model_validator(mode="after")
    def _width_below_center(self):
        if self.spectral_width_nm >= self.signal_center_wavelength_nm:
            raise ValueError("spectral_width_nm must be smaller than signal_center_wavelength_nm")
        return self


class GridModel(_Model):
    theta_max_mrad: float = Field(30.0, gt=0)
    n_theta: int = Field(513, ge=1)
    n_omega: int = Field(129, ge=1)

    @field_validator("n_theta", "n_omega")
    @classmethod
    def _odd(cls, v):
        if v % 2 == 0:
            raise ValueError("must be odd")
        return v


class EvolutionModel(_Model):
    n_beta: int = Field(401, ge=1)
    beta_max_per_rad: Optional[float] = Field(None, gt=0)
    beta_values_per_rad: Optional[list[float]] = None


class OutputModel(_Model):
    formats: list[Literal["csv", "json", "svg"]] = ["csv", "svg"]


class RunConfig(_Model):
    id: str = Field("custom", min_length=1, pattern=r"^[A-Za-z0-9_.\-]+$")
    probe1: ProbeModel = Field(default_factory=lambda: ProbeModel(gamma=0.91))
    probe2: ProbeModel = Field(default_factory=lambda: ProbeModel(gamma=0.96))
    env1: EnvModel = Field(default_factory=lambda: EnvModel(spectral_width_nm=45.0))
    env2: EnvModel = Field(default_factory=EnvModel)
    grid: GridModel = Field(default_factory=GridModel)
    evolution: EvolutionModel = Field(default_factory=EvolutionModel)
    output: OutputModel = Field(default_factory=OutputModel)
    family: Optional[Literal["3a", "3b", "3c", "3d", "4"]] = None
    variants: list[EnvModel] = []
    phase_scramble2: float = 0.0


def _format_errors(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"{loc}: {err['msg']}")
    return "\n".join(lines)


def parse_config(text: str) -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    try:
        return RunConfig.model_validate(doc)
    except ValidationError as exc:
        raise ConfigError(_format_errors(exc)) from None


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def _prep(m: ProbeModel) -> PolarizationPrep:
    return PolarizationPrep(m.alpha_rad, m.gamma)


def _env(m: EnvModel) -> PhysicalConfig:
    return PhysicalConfig(**m.model_dump())


def _grid(cfg: RunConfig) -> AngularGrid:
    return AngularGrid(**cfg.grid.model_dump())


def to_scenario(cfg: RunConfig) -> harness.Scenario:
    ev = cfg.evolution
    evolution = None
    if ev.beta_values_per_rad is not None:
        evolution = EvolutionSpec(tuple(ev.beta_values_per_rad))
    elif ev.beta_max_per_rad is not None:
        evolution = EvolutionSpec.linear(ev.beta_max_per_rad, ev.n_beta)
    return harness.Scenario(
        id=cfg.id,
        prep1=_prep(cfg.probe1),
        prep2=_prep(cfg.probe2),
        env1=_env(cfg.env1),
        env2=_env(cfg.env2),
        grid=_grid(cfg),
        evolution=evolution,
        n_beta=ev.n_beta,
        phase_scramble2=cfg.phase_scramble2,
    )


def _load(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _formats(args, cfg: RunConfig) -> list[str]:
    if args.format:
        fmts = [f.strip() for f in args.format.split(",") if f.strip()]
        bad = [f for f in fmts if f not in harness.FORMATS]
        if bad:
            raise ConfigError(f"unknown output format(s): {', '.join(bad)}")
        return fmts
    return list(cfg.output.formats)


def _emit(results, fmts, out: Path) -> None:
    for fmt in fmts:
        harness.write_outputs(results, fmt, out)
    print(",".join(harness.SUMMARY_HEADER))
    for r in results:
        row = r.summary_row()
        print(",".join([row[0]] + [f"{x:.6g}" for x in row[1:]]))


def _cmd_simulate(args) -> int:
    cfg = _load(args.config)
    results = harness.run_scenarios([to_scenario(cfg)])
    _emit(results, _formats(args, cfg), Path(args.out))
    return EXIT_OK


def _figure4(base: harness.Scenario, variants, fmts, out: Path) -> None:
    results = harness.figure4_dataset(base, variants)
    _emit(results, fmts, out)
    if "svg" in fmts:
        plotting.plot_witness(results, out / "figure4.svg")


def _cmd_figure(args) -> int:
    cfg = _load(args.config)
    fmts = _formats(args, cfg)
    out = Path(args.out)
    fig_id = args.id or cfg.family
    if fig_id is None:
        raise ConfigError("family: give --id or set family in the config")
    if fig_id == "4":
        base = harness.Scenario("fig4", grid=_grid(cfg), n_beta=cfg.evolution.n_beta)
        _figure4(base, harness.figure4_variants(), fmts, out)
        return EXIT_OK
    scenarios = harness.builtin_scenarios(f"fig{fig_id}", _grid(cfg))
    _emit(harness.run_scenarios(scenarios), fmts, out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load(args.config)
    if not cfg.variants:
        raise ConfigError("variants: sweep needs at least one env2 variant")
    _figure4(to_scenario(cfg), [_env(v) for v in cfg.variants], _formats(args, cfg), Path(args.out))
    return EXIT_OK


def _cmd_validate(args) -> int:
    checks = run_checks()
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdcprobe",
        description="Trace-distance probe of angular correlations in SPDC photon pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="{simulate,figure,sweep,validate}")

    def outputs(p):
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--format", help="comma-separated subset of csv,json,svg (default from config)")

    p = sub.add_parser("simulate", help="run the scenario described by a JSON config")
    p.add_argument("--config", required=True)
    outputs(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("figure", help="run a built-in figure family")
    p.add_argument("--id", choices=["3a", "3b", "3c", "3d", "4"], help="defaults to the config's family")
    p.add_argument("--config", help="optional JSON config (grid and evolution settings)")
    outputs(p)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("sweep", help="run the env2 variants listed in a JSON config")
    p.add_argument("--config", required=True)
    outputs(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("validate", help="run analytic-oracle self checks")
    p.set_defaults(func=_cmd_validate)
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"spdcprobe: config error:\n{exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpdcProbeError as exc:
        print(f"spdcprobe: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())
