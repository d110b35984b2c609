"""CLI commands for fnls-waves."""

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, TypeVar

import click
import numpy as np
from pydantic import ValidationError

from fnls_waves.cli.artifacts import (
    SpectrumArtifact,
    StokesArtifact,
    StokesOrderCheck,
    SweepSidecar,
    ValidationArtifact,
    WaveArtifact,
    read_wave,
    sidecar_path,
    write_json,
    write_profile_csv,
    write_sweep_csv,
)
from fnls_waves.cli.formatters import (
    create_progress,
    create_sweep_progress,
    err_console,
    print_error,
    print_solve_result,
    print_spectral_report,
    print_stokes,
    print_success,
    print_sweep,
    print_validation,
    print_warning,
)
from fnls_waves.config import Config, SweepSettings, get_config
from fnls_waves.core.closed_form import dn_solution, stokes_wave
from fnls_waves.core.errors import FnlsError
from fnls_waves.core.linearized import spectral_report
from fnls_waves.core.models import FourierGrid, FractionalParams, RunConfig, SolveResult
from fnls_waves.core.petviashvili import CONSTANT_THRESHOLD, solve_wave
from fnls_waves.core.spectral import make_grid, residual
from fnls_waves.core.vk import classify, mass_curve, vk_index

# Setup logging
logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_COMPUTATION = 2

DN_TOLERANCE = 1e-6
STOKES_DEFAULT_AMPLITUDE = 0.05
STOKES_RATIO_RANGE = (12.0, 20.0)

F = TypeVar("F", bound=Callable[..., Any])


class FnlsGroup(click.Group):
    """Command group whose usage errors exit with status 1."""

    def main(self, *args: Any, **kwargs: Any) -> Any:
        kwargs["standalone_mode"] = False
        try:
            return super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            err_console.print("Aborted!")
            sys.exit(EXIT_USAGE)


def solver_options(func: F) -> F:
    """Options shared by every command that solves for a wave."""
    options = [
        click.option("--s", type=float, help="Fractional order in (0, 1]"),
        click.option("--n", "n_points", type=int, help="Grid points (even, >= 8)"),
        click.option("--nu", type=float, help="Stabilizing factor exponent (default 1.5)"),
        click.option("--tol", type=float, help="Tolerance for all monitors (default 1e-12)"),
        click.option("--max-iter", type=int, help="Iteration cap (default 500)"),
        click.option(
            "--even/--no-even",
            "enforce_even",
            default=None,
            help="Project iterates onto even fields",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def output_options(func: F) -> F:
    """Artifact path and format."""
    func = click.option(
        "--format", "output_format", type=click.Choice(["json", "csv"]), help="Artifact format"
    )(func)
    func = click.option(
        "--out", type=click.Path(dir_okay=False, path_type=Path), help="Artifact path"
    )(func)
    return func


def _describe(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in item['loc']) or 'options'}: {item['msg']}"
        for item in error.errors()
    )


def _run_config(ctx: click.Context, subcommand: str, **values: Any) -> RunConfig:
    """Merge explicit flags over configured defaults and validate."""
    config: Config = ctx.obj["config"]
    defaults = {
        "nu": config.solver.nu,
        "tol": config.solver.tol,
        "max_iter": config.solver.max_iter,
        "enforce_even": config.solver.enforce_even,
        "n_grid": config.grid.n_points,
        "n_modes": config.spectrum.n_modes,
        "kernel_tolerance": config.spectrum.kernel_tolerance,
        "output_format": config.output.format,
    }
    explicit = {key: value for key, value in values.items() if value is not None}
    try:
        return RunConfig(subcommand=subcommand, **{**defaults, **explicit})
    except ValidationError as e:
        raise click.UsageError(_describe(e), ctx=ctx)


def _output_path(ctx: click.Context, run: RunConfig, stem: str, suffix: str) -> Path:
    if run.output_path is not None:
        return run.output_path
    config: Config = ctx.obj["config"]
    return config.output.directory / f"{stem}.{suffix}"


def _write(writer: Callable[[], Path]) -> Path:
    try:
        return writer()
    except OSError as e:
        print_error(f"Cannot write artifact: {e}")
        sys.exit(EXIT_USAGE)


def _solve_wave(run: RunConfig) -> SolveResult:
    grid = make_grid(run.n_grid)
    p = run.fractional_params()

    with create_progress() as progress:
        task = progress.add_task(f"[cyan]Solving s={p.s:g}, ω={p.omega:g}...", total=None)

        try:
            result = solve_wave(grid, p, run.petviashvili_config())
            progress.update(task, completed=True)

        except FnlsError as e:
            progress.stop()
            print_error(f"Solve failed: {e}")
            logger.exception("Solve failed")
            sys.exit(EXIT_COMPUTATION)

    return result


def _stokes_residual(grid: FourierGrid, a: float, s: float) -> float:
    field, params = stokes_wave(grid, a, s)
    _, res_norm = residual(field, FractionalParams(s=s, omega=params.omega))
    return res_norm


@click.group(cls=FnlsGroup)
@click.option(
    "--config", type=click.Path(exists=True, path_type=Path), help="Path to configuration file"
)
@click.option("--verbose", "-v", is_flag=True, help="Log every solver iteration")
@click.pass_context
def cli(ctx: click.Context, config: Optional[Path], verbose: bool) -> None:
    """
    fnls-waves: periodic standing waves of the fractional NLS.

    Computes wave profiles by Petviashvili iteration, checks them against
    closed-form solutions, reports the spectra of the linearized operators
    and sweeps the Vakhitov–Kolokolov index over frequency.
    """
    ctx.ensure_object(dict)
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        ctx.obj["config"] = get_config(config)
    except Exception as e:
        print_error(f"Failed to load configuration: {e}")
        sys.exit(EXIT_USAGE)


@cli.command()
@click.option("--omega", type=float, required=True, help="Wave frequency ω > 0")
@solver_options
@output_options
@click.pass_context
def solve(
    ctx: click.Context,
    omega: float,
    s: Optional[float],
    n_points: Optional[int],
    nu: Optional[float],
    tol: Optional[float],
    max_iter: Optional[int],
    enforce_even: Optional[bool],
    out: Optional[Path],
    output_format: Optional[str],
) -> None:
    """
    Compute a standing-wave profile.

    Exits 0 on convergence and 2 when the iteration cap is reached first; the
    wave file is written in both cases.
    """
    run = _run_config(
        ctx,
        "solve",
        s=s,
        omega=omega,
        n_grid=n_points,
        nu=nu,
        tol=tol,
        max_iter=max_iter,
        enforce_even=enforce_even,
        output_path=out,
        output_format=output_format,
    )
    result = _solve_wave(run)
    print_solve_result(result)

    path = _output_path(ctx, run, "wave", run.output_format)
    if run.output_format == "csv":
        _write(lambda: write_profile_csv(result.profile, run, path))
    else:
        _write(lambda: write_json(WaveArtifact(run_config=run, result=result), path))

    if not result.converged:
        print_warning(
            f"No convergence after {result.iterations} iterations; wave written to {path}"
        )
        sys.exit(EXIT_COMPUTATION)

    print_success(f"Wave written to {path}")


@cli.command()
@click.option("--case", type=click.Choice(["dn", "stokes"]), required=True, help="Reference family")
@click.option("--omega", type=float, help="Frequency for the dn case (default 1)")
@click.option("--a", "amplitude", type=float, help="Stokes amplitude (default 0.05)")
@solver_options
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Report path")
@click.pass_context
def validate(
    ctx: click.Context,
    case: str,
    omega: Optional[float],
    amplitude: Optional[float],
    s: Optional[float],
    n_points: Optional[int],
    nu: Optional[float],
    tol: Optional[float],
    max_iter: Optional[int],
    enforce_even: Optional[bool],
    out: Optional[Path],
) -> None:
    """
    Check the solver against a closed-form solution.

    dn: solver vs the dnoidal wave at s = 1, passes when the sup-norm gap is
    at most 1e-6. stokes: residual ratio RES(a)/RES(a/2), passes in [12, 20].
    """
    if case == "dn":
        if s is not None and s != 1.0:
            raise click.UsageError("--case dn requires --s 1", ctx=ctx)
        omega = 1.0 if omega is None else omega
        if omega <= CONSTANT_THRESHOLD:
            raise click.UsageError("--case dn requires --omega > 1/2", ctx=ctx)
        run = _run_config(
            ctx,
            "validate",
            case="dn",
            s=1.0,
            omega=omega,
            n_grid=n_points,
            nu=nu,
            tol=tol,
            max_iter=max_iter,
            enforce_even=enforce_even,
            output_path=out,
            output_format="json",
        )
        result = _solve_wave(run)
        exact = dn_solution(make_grid(run.n_grid), omega)
        discrepancy = float(np.max(np.abs(result.profile.values - exact.values)))
        artifact = ValidationArtifact(
            run_config=run,
            case="dn",
            passed=result.converged and discrepancy <= DN_TOLERANCE,
            discrepancy=discrepancy,
            result=result,
        )
    else:
        amplitude = STOKES_DEFAULT_AMPLITUDE if amplitude is None else amplitude
        if amplitude <= 0.0:
            raise click.UsageError("--a must be positive", ctx=ctx)
        run = _run_config(
            ctx,
            "validate",
            case="stokes",
            a=amplitude,
            s=s,
            n_grid=n_points,
            output_path=out,
            output_format="json",
        )
        grid = make_grid(run.n_grid)
        res_full = _stokes_residual(grid, amplitude, run.s)
        res_half = _stokes_residual(grid, 0.5 * amplitude, run.s)
        ratio = res_full / res_half if res_half > 0.0 else float("inf")
        low, high = STOKES_RATIO_RANGE
        artifact = ValidationArtifact(
            run_config=run,
            case="stokes",
            passed=low <= ratio <= high,
            stokes=StokesOrderCheck(
                amplitude=amplitude, res_full=res_full, res_half=res_half, ratio=ratio
            ),
        )

    print_validation(artifact)
    path = _write(lambda: write_json(artifact, _output_path(ctx, run, f"validate-{case}", "json")))

    if not artifact.passed:
        print_error(f"Validation '{case}' failed (report in {path})")
        sys.exit(EXIT_COMPUTATION)

    print_success(f"Validation '{case}' passed (report in {path})")


@cli.command()
@click.option(
    "--in",
    "input_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Wave file from solve or stokes",
)
@click.option("--omega", type=float, help="Frequency when solving inline")
@click.option("--modes", "n_modes", type=int, help="Fourier truncation M (default 256)")
@solver_options
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Report path")
@click.pass_context
def spectrum(
    ctx: click.Context,
    input_path: Optional[Path],
    omega: Optional[float],
    n_modes: Optional[int],
    s: Optional[float],
    n_points: Optional[int],
    nu: Optional[float],
    tol: Optional[float],
    max_iter: Optional[int],
    enforce_even: Optional[bool],
    out: Optional[Path],
) -> None:
    """
    Report the spectra of L₁ and L₂ around a wave.

    The wave comes from --in or is solved inline from --s and --omega.
    """
    config: Config = ctx.obj["config"]

    def modes_for(n_grid: int) -> int:
        # the configured default shrinks to fit coarse grids; an explicit --modes does not
        return n_modes if n_modes is not None else min(config.spectrum.n_modes, n_grid // 2)

    if input_path is not None:
        try:
            _, profile, params = read_wave(input_path)
        except (OSError, ValueError, KeyError) as e:
            print_error(f"Cannot read wave file {input_path}: {e}")
            sys.exit(EXIT_USAGE)
        run = _run_config(
            ctx,
            "spectrum",
            s=params.s,
            omega=params.omega,
            n_grid=profile.grid.n_points,
            n_modes=modes_for(profile.grid.n_points),
            input_path=input_path,
            output_path=out,
            output_format="json",
        )
    else:
        if omega is None:
            raise click.UsageError("Pass --in FILE or --omega", ctx=ctx)
        run = _run_config(
            ctx,
            "spectrum",
            s=s,
            omega=omega,
            n_grid=n_points,
            nu=nu,
            tol=tol,
            max_iter=max_iter,
            enforce_even=enforce_even,
            n_modes=modes_for(n_points or config.grid.n_points),
            output_path=out,
            output_format="json",
        )
        result = _solve_wave(run)
        if not result.converged:
            print_error("Solver did not converge; no spectrum computed")
            sys.exit(EXIT_COMPUTATION)
        profile, params = result.profile, result.params

    with create_progress() as progress:
        task = progress.add_task(f"[cyan]Diagonalizing (M = {run.n_modes})...", total=None)
        report = spectral_report(profile, params, run.n_modes, run.kernel_tolerance)
        progress.update(task, completed=True)

    print_spectral_report(report)
    path = _write(
        lambda: write_json(
            SpectrumArtifact(run_config=run, report=report),
            _output_path(ctx, run, "spectrum", "json"),
        )
    )
    print_success(f"Spectrum written to {path}")


@cli.command()
@click.option("--s", type=float, help="Fractional order in (0, 1]")
@click.option("--omega-min", type=float, help="Open left end of the sweep (>= 1/2)")
@click.option("--omega-max", type=float, help="Right end of the sweep")
@click.option("--steps", type=int, help="Number of sweep points")
@click.option("--n", "n_points", type=int, help="Grid points per solve")
@click.option("--nu", type=float, help="Stabilizing factor exponent (default 1.5)")
@click.option("--tol", type=float, help="Tolerance for all monitors (default 1e-12)")
@click.option("--max-iter", type=int, help="Iteration cap per solve (default 500)")
@click.option("--parallel/--sequential", default=None, help="Cold-start points in a process pool")
@click.option("--workers", type=int, help="Process pool size")
@click.option("--full-scale", is_flag=True, help="(1/2, 50] in 1000 steps on 2^14 points")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="CSV path")
@click.pass_context
def sweep(
    ctx: click.Context,
    s: Optional[float],
    omega_min: Optional[float],
    omega_max: Optional[float],
    steps: Optional[int],
    n_points: Optional[int],
    nu: Optional[float],
    tol: Optional[float],
    max_iter: Optional[int],
    parallel: Optional[bool],
    workers: Optional[int],
    full_scale: bool,
    out: Optional[Path],
) -> None:
    """
    Sweep the wave mass over ω and classify the sign of q = dM/dω.

    Writes a CSV table (omega, mass, q, converged) and a JSON sidecar with
    the verdict.
    """
    config: Config = ctx.obj["config"]
    base = SweepSettings.full_scale() if full_scale else config.sweep

    def pick(value: Any, default: Any) -> Any:
        return default if value is None else value

    run = _run_config(
        ctx,
        "sweep",
        s=s,
        omega_min=pick(omega_min, base.omega_min),
        omega_max=pick(omega_max, base.omega_max),
        steps=pick(steps, base.steps),
        n_grid=pick(n_points, base.n_points),
        nu=nu,
        tol=tol,
        max_iter=max_iter,
        parallel=pick(parallel, base.parallel),
        workers=pick(workers, base.workers),
        output_path=out,
        output_format="csv",
    )
    assert run.omega_min is not None and run.omega_max is not None and run.steps is not None

    with create_sweep_progress() as progress:
        task = progress.add_task(f"[cyan]Sweeping s={run.s:g}", total=run.steps)

        def advance(omega: float, converged: bool) -> None:
            progress.advance(task)

        try:
            result = mass_curve(
                run.s,
                run.omega_min,
                run.omega_max,
                run.steps,
                run.n_grid,
                run.petviashvili_config(),
                parallel=run.parallel,
                workers=run.workers,
                progress=advance,
            )
            result = vk_index(result)

        except FnlsError as e:
            progress.stop()
            print_error(f"Sweep failed: {e}")
            logger.exception("Sweep failed")
            sys.exit(EXIT_COMPUTATION)

    classification = classify(result)
    print_sweep(result, classification)

    path = _output_path(ctx, run, "sweep", "csv")
    sidecar = SweepSidecar(
        run_config=run,
        classification=classification,
        omega_c=result.omega_c,
        n_converged=int(result.convergence_flags.sum()),
    )
    _write(lambda: write_sweep_csv(result, path))
    _write(lambda: write_json(sidecar, sidecar_path(path)))
    print_success(f"Sweep written to {path} and {sidecar_path(path)}")


@cli.command()
@click.option("--a", "amplitude", type=float, required=True, help="Amplitude a >= 0")
@click.option("--s", type=float, help="Fractional order in (0, 1]")
@click.option("--n", "n_points", type=int, help="Grid points (even, >= 8)")
@output_options
@click.pass_context
def stokes(
    ctx: click.Context,
    amplitude: float,
    s: Optional[float],
    n_points: Optional[int],
    out: Optional[Path],
    output_format: Optional[str],
) -> None:
    """Sample the third-order Stokes wave and report its residual."""
    run = _run_config(
        ctx,
        "stokes",
        a=amplitude,
        s=s,
        n_grid=n_points,
        output_path=out,
        output_format=output_format,
    )
    field, params = stokes_wave(make_grid(run.n_grid), amplitude, run.s)
    _, res_norm = residual(field, FractionalParams(s=run.s, omega=params.omega))
    print_stokes(params, res_norm)

    path = _output_path(ctx, run, "stokes", run.output_format)
    if run.output_format == "csv":
        _write(lambda: write_profile_csv(field, run, path))
    else:
        artifact = StokesArtifact(run_config=run, params=params, profile=field, res_norm=res_norm)
        _write(lambda: write_json(artifact, path))
    print_success(f"Stokes wave written to {path}")


def main() -> None:
    """Main entry point."""
    cli(obj={})


if __name__ == "__main__":
    main()
