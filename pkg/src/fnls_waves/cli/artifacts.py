"""Artifact files written and read by the CLI.

Structured results are JSON dumps of pydantic models; profiles and sweep
tables can also be written as CSV with 17 significant digits so a re-read
reproduces every double exactly.
"""

import csv
import json
import math
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict

from fnls_waves.core.models import (
    Classification,
    FractionalParams,
    RealPeriodicField,
    RunConfig,
    SolveResult,
    SpectralReport,
    StokesParams,
    VKSweep,
)
from fnls_waves.core.spectral import make_grid

FLOAT_FORMAT = ".17g"
RUN_CONFIG_PREFIX = "# run_config: "

ModelT = TypeVar("ModelT", bound=BaseModel)


class WaveArtifact(BaseModel):
    """Output of ``solve``."""

    run_config: RunConfig
    result: SolveResult

    model_config = ConfigDict(arbitrary_types_allowed=True)


class StokesOrderCheck(BaseModel):
    """Residuals of the Stokes wave at a and a/2."""

    amplitude: float
    res_full: float
    res_half: float
    ratio: float


class ValidationArtifact(BaseModel):
    """Output of ``validate``."""

    run_config: RunConfig
    case: Literal["dn", "stokes"]
    passed: bool
    discrepancy: Optional[float] = None
    result: Optional[SolveResult] = None
    stokes: Optional[StokesOrderCheck] = None

    model_config = ConfigDict(arbitrary_types_allowed=True)


class SpectrumArtifact(BaseModel):
    """Output of ``spectrum``."""

    run_config: RunConfig
    report: SpectralReport

    model_config = ConfigDict(arbitrary_types_allowed=True)


class SweepSidecar(BaseModel):
    """JSON companion of a sweep CSV."""

    run_config: RunConfig
    classification: Classification
    omega_c: Optional[float] = None
    n_converged: int


class StokesArtifact(BaseModel):
    """Output of ``stokes``."""

    run_config: RunConfig
    params: StokesParams
    profile: RealPeriodicField
    res_norm: float

    model_config = ConfigDict(arbitrary_types_allowed=True)


def _format(value: float) -> str:
    return "" if not math.isfinite(value) else format(value, FLOAT_FORMAT)


def _parse(text: str) -> float:
    return float(text) if text.strip() else math.nan


def sidecar_path(csv_path: Path) -> Path:
    return csv_path.with_suffix(".json")


def write_json(model: BaseModel, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def read_json(model_type: Type[ModelT], path: Path) -> ModelT:
    return model_type.model_validate_json(path.read_text(encoding="utf-8"))


def write_profile_csv(profile: RealPeriodicField, run_config: RunConfig, path: Path) -> Path:
    """Columns x, phi under a comment line carrying the run config."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(RUN_CONFIG_PREFIX + run_config.model_dump_json() + "\n")
        writer = csv.writer(f)
        writer.writerow(["x", "phi"])
        for x, value in zip(profile.grid.nodes, profile.values):
            writer.writerow([_format(float(x)), _format(float(value))])
    return path


def read_profile_csv(path: Path) -> Tuple[RunConfig, RealPeriodicField]:
    with open(path, "r", newline="", encoding="utf-8") as f:
        header = f.readline()
        if not header.startswith(RUN_CONFIG_PREFIX):
            raise ValueError(f"{path} has no run_config header line")
        run_config = RunConfig.model_validate_json(header[len(RUN_CONFIG_PREFIX) :])
        rows = list(csv.DictReader(f))
    values = np.array([_parse(row["phi"]) for row in rows])
    return run_config, RealPeriodicField(values=values, grid=make_grid(len(values)))


def read_wave(path: Path) -> Tuple[RunConfig, RealPeriodicField, FractionalParams]:
    """Profile and parameters from a ``solve`` or ``stokes`` artifact (JSON or CSV)."""
    if path.suffix.lower() == ".csv":
        run_config, profile = read_profile_csv(path)
        if run_config.subcommand == "stokes":
            raise ValueError("Stokes CSV files carry no frequency; use the JSON artifact")
        return run_config, profile, run_config.fractional_params()

    data = json.loads(path.read_text(encoding="utf-8"))
    if "result" in data:
        wave = WaveArtifact.model_validate(data)
        return wave.run_config, wave.result.profile, wave.result.params
    stokes = StokesArtifact.model_validate(data)
    params = FractionalParams(s=stokes.params.s, omega=stokes.params.omega)
    return stokes.run_config, stokes.profile, params


def write_sweep_csv(sweep: VKSweep, path: Path) -> Path:
    """Columns omega, mass, q, converged; q is empty on the last row and across failures."""
    path.parent.mkdir(parents=True, exist_ok=True)
    q_column: List[float] = [math.nan] * len(sweep.omegas)
    if sweep.q_values is not None:
        q_column[:-1] = [float(q) for q in sweep.q_values]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["omega", "mass", "q", "converged"])
        rows = zip(sweep.omegas, sweep.masses, q_column, sweep.convergence_flags)
        for omega, m, q, flag in rows:
            writer.writerow(
                [_format(float(omega)), _format(float(m)), _format(q), str(bool(flag)).lower()]
            )
    return path


def read_sweep_csv(path: Path, s: float, n_points: int) -> VKSweep:
    with open(path, "r", newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    q = [_parse(row["q"]) for row in rows[:-1]]
    return VKSweep(
        s=s,
        n_points=n_points,
        omegas=[_parse(row["omega"]) for row in rows],
        masses=[_parse(row["mass"]) for row in rows],
        convergence_flags=[row["converged"] == "true" for row in rows],
        q_values=q,
    )


def read_sweep(path: Path) -> Tuple[SweepSidecar, VKSweep]:
    """Sweep table and sidecar, with the sidecar's ω_c restored on the sweep."""
    sidecar = read_json(SweepSidecar, sidecar_path(path))
    sweep = read_sweep_csv(path, sidecar.run_config.s, sidecar.run_config.n_grid)
    return sidecar, sweep.model_copy(update={"omega_c": sidecar.omega_c})
