"""Tests for the command-line interface."""

import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from fnls_waves.cli.artifacts import (
    SpectrumArtifact,
    StokesArtifact,
    ValidationArtifact,
    WaveArtifact,
    read_json,
    read_sweep,
    read_wave,
)
from fnls_waves.cli.commands import cli
from fnls_waves.core.closed_form import dn_solution_params
from fnls_waves.core.models import StabilityKind


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def invoke(runner: CliRunner, *args: str):
    return runner.invoke(cli, list(args), obj={})


class TestSolve:
    def test_converged_wave(self, runner, isolated):
        result = invoke(runner, "solve", "--s", "1.0", "--omega", "1.0", "--n", "256")
        assert result.exit_code == 0, result.output

        artifact = read_json(WaveArtifact, isolated / "wave.json")
        assert artifact.result.converged
        assert artifact.run_config.n_grid == 256
        peak = float(np.max(artifact.result.profile.values))
        assert peak == pytest.approx(dn_solution_params(1.0).eta1, abs=1e-8)

    def test_constant_branch(self, runner, isolated):
        result = invoke(runner, "solve", "--s", "0.7", "--omega", "0.4", "--n", "64")
        assert result.exit_code == 0
        artifact = read_json(WaveArtifact, isolated / "wave.json")
        assert artifact.result.iterations == 0
        assert np.all(artifact.result.profile.values == math.sqrt(0.4))

    def test_iteration_cap_exits_two(self, runner, isolated):
        out = isolated / "capped.json"
        result = invoke(
            runner, "solve", "--omega", "1.0", "--n", "256", "--max-iter", "1", "--out", str(out)
        )
        assert result.exit_code == 2
        artifact = read_json(WaveArtifact, out)
        assert not artifact.result.converged
        assert len(artifact.result.trace.error_n) == 1

    def test_csv_output(self, runner, isolated):
        invoke(runner, "solve", "--omega", "1.2", "--n", "128")
        result = invoke(runner, "solve", "--omega", "1.2", "--n", "128", "--format", "csv")
        assert result.exit_code == 0

        from_json = read_wave(isolated / "wave.json")[1]
        run_config, from_csv, params = read_wave(isolated / "wave.csv")
        assert run_config.output_format == "csv"
        assert params.omega == 1.2
        assert np.array_equal(from_csv.values, from_json.values)

    def test_output_is_deterministic(self, runner, isolated):
        invoke(runner, "solve", "--s", "0.8", "--omega", "1.5", "--n", "128", "--out", "a.json")
        first = (isolated / "a.json").read_bytes()
        invoke(runner, "solve", "--s", "0.8", "--omega", "1.5", "--n", "128", "--out", "a.json")
        assert (isolated / "a.json").read_bytes() == first

    def test_missing_omega_is_usage_error(self, runner, isolated):
        assert invoke(runner, "solve", "--s", "0.8").exit_code == 1

    @pytest.mark.parametrize(
        "flags",
        [["--n", "7"], ["--s", "1.5"], ["--omega", "-1"], ["--nu", "2.5"], ["--tol", "0"]],
    )
    def test_invalid_values_are_usage_errors(self, runner, isolated, flags):
        args = ["solve", "--omega", "1.0", "--n", "64"] + flags
        result = invoke(runner, *args)
        assert result.exit_code == 1
        assert not (isolated / "wave.json").exists()

    def test_unwritable_path(self, runner, isolated):
        blocker = isolated / "file.txt"
        blocker.write_text("")
        out = blocker / "wave.json"
        result = invoke(runner, "solve", "--omega", "1.0", "--n", "64", "--out", str(out))
        assert result.exit_code == 1


class TestValidate:
    def test_dnoidal_case(self, runner, isolated):
        result = invoke(runner, "validate", "--case", "dn", "--omega", "1", "--n", "1024")
        assert result.exit_code == 0, result.output
        artifact = read_json(ValidationArtifact, isolated / "validate-dn.json")
        assert artifact.passed
        assert artifact.discrepancy <= 1e-8

    def test_dnoidal_case_requires_cubic_order(self, runner, isolated):
        assert invoke(runner, "validate", "--case", "dn", "--s", "0.5").exit_code == 1

    def test_dnoidal_case_requires_wave(self, runner, isolated):
        assert invoke(runner, "validate", "--case", "dn", "--omega", "0.5").exit_code == 1

    def test_stokes_case(self, runner, isolated):
        result = invoke(runner, "validate", "--case", "stokes", "--s", "0.8", "--a", "0.05")
        assert result.exit_code == 0, result.output
        artifact = read_json(ValidationArtifact, isolated / "validate-stokes.json")
        assert artifact.passed
        assert 12.0 <= artifact.stokes.ratio <= 20.0

    def test_stokes_case_rejects_zero_amplitude(self, runner, isolated):
        assert invoke(runner, "validate", "--case", "stokes", "--a", "0").exit_code == 1


class TestSpectrum:
    def test_from_wave_file(self, runner, isolated):
        invoke(runner, "solve", "--s", "1.0", "--omega", "1.0", "--n", "256")
        result = invoke(runner, "spectrum", "--in", "wave.json", "--modes", "64")
        assert result.exit_code == 0, result.output

        artifact = read_json(SpectrumArtifact, isolated / "spectrum.json")
        assert artifact.report.counts == (1, 1, 0, 1)
        assert artifact.run_config.input_path is not None
        assert len(artifact.report.eig_L1) == 129

    def test_truncation_does_not_change_counts(self, runner, isolated):
        invoke(runner, "solve", "--s", "0.8", "--omega", "2.0", "--n", "512")
        counts = []
        for modes in ("128", "256"):
            out = f"spectrum-{modes}.json"
            invoke(runner, "spectrum", "--in", "wave.json", "--modes", modes, "--out", out)
            counts.append(read_json(SpectrumArtifact, isolated / out).report.counts)
        assert counts[0] == counts[1] == (1, 1, 0, 1)

    def test_default_modes_fit_coarse_grid(self, runner, isolated):
        invoke(runner, "solve", "--s", "0.8", "--omega", "1.5", "--n", "128")
        result = invoke(runner, "spectrum", "--in", "wave.json")
        assert result.exit_code == 0, result.output
        assert read_json(SpectrumArtifact, isolated / "spectrum.json").report.n_modes == 64

    def test_inline_constant(self, runner, isolated):
        args = ["spectrum", "--s", "1", "--omega", "0.4", "--n", "64", "--modes", "16"]
        result = invoke(runner, *args)
        assert result.exit_code == 0, result.output
        report = read_json(SpectrumArtifact, isolated / "spectrum.json").report
        assert report.n_L1 == 1

    def test_malformed_file(self, runner, isolated):
        (isolated / "bad.json").write_text("not json")
        assert invoke(runner, "spectrum", "--in", "bad.json").exit_code == 1

    def test_missing_file(self, runner, isolated):
        assert invoke(runner, "spectrum", "--in", "absent.json").exit_code == 1

    def test_needs_a_wave(self, runner, isolated):
        assert invoke(runner, "spectrum").exit_code == 1

    def test_too_many_modes(self, runner, isolated):
        args = ["spectrum", "--omega", "1", "--n", "64", "--modes", "64"]
        assert invoke(runner, *args).exit_code == 1


class TestSweep:
    def test_small_sweep(self, runner, isolated):
        args = ["sweep", "--s", "0.8", "--omega-min", "0.6", "--omega-max", "2", "--steps", "6"]
        result = invoke(runner, *args, "--n", "256", "--out", "sweep.csv")
        assert result.exit_code == 0, result.output

        sidecar, sweep = read_sweep(isolated / "sweep.csv")
        assert sidecar.classification.kind == StabilityKind.STABLE
        assert sidecar.n_converged == 6
        assert sidecar.run_config.steps == 6
        assert len(sweep.omegas) == 6
        assert sweep.omegas[0] > 0.6
        assert np.isnan(sweep.q_values).sum() == 0

        lines = (isolated / "sweep.csv").read_text().splitlines()
        assert lines[-1].split(",")[2] == ""

        raw = json.loads((isolated / "sweep.json").read_text())
        assert raw["classification"]["kind"] == "stable"

    def test_omega_min_below_threshold(self, runner, isolated):
        args = ["sweep", "--omega-min", "0.4", "--omega-max", "2", "--steps", "4", "--n", "64"]
        assert invoke(runner, *args).exit_code == 1

    def test_all_failed_exits_two(self, runner, isolated):
        args = ["sweep", "--omega-min", "1", "--omega-max", "2", "--steps", "3", "--n", "64"]
        assert invoke(runner, *args, "--max-iter", "1").exit_code == 2


class TestStokes:
    def test_json(self, runner, isolated):
        result = invoke(runner, "stokes", "--a", "0.05", "--s", "1.0", "--n", "64")
        assert result.exit_code == 0, result.output
        artifact = read_json(StokesArtifact, isolated / "stokes.json")
        assert artifact.params.gamma == pytest.approx(3.0)
        assert artifact.params.omega == pytest.approx(0.5 + 0.0025 * 3.0)
        assert artifact.res_norm < 1e-3

    def test_negative_amplitude(self, runner, isolated):
        assert invoke(runner, "stokes", "--a", "-0.1").exit_code == 1


class TestConfigFile:
    def test_grid_from_yaml(self, runner, isolated):
        (isolated / "custom.yaml").write_text("grid:\n  n_points: 128\n")
        result = invoke(runner, "--config", "custom.yaml", "solve", "--omega", "1.0")
        assert result.exit_code == 0, result.output
        assert read_json(WaveArtifact, isolated / "wave.json").run_config.n_grid == 128

    def test_output_directory_from_yaml(self, runner, isolated):
        (isolated / "fnls.yaml").write_text("output:\n  directory: results\n")
        result = invoke(runner, "stokes", "--a", "0.05", "--n", "32")
        assert result.exit_code == 0, result.output
        assert (isolated / "results" / "stokes.json").exists()

    def test_missing_config_file(self, runner, isolated):
        assert invoke(runner, "--config", "absent.yaml", "solve", "--omega", "1").exit_code == 1


def test_help(runner):
    result = invoke(runner, "--help")
    assert result.exit_code == 0
    for command in ("solve", "validate", "spectrum", "sweep", "stokes"):
        assert command in result.output
