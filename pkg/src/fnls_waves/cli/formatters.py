"""Output formatters for CLI using Rich."""

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn
from rich.table import Table

from fnls_waves.cli.artifacts import ValidationArtifact
from fnls_waves.core.models import (
    Classification,
    SolveResult,
    SpectralReport,
    StabilityKind,
    StokesParams,
    VKSweep,
)

console = Console()
err_console = Console(stderr=True)

_KIND_STYLE = {
    StabilityKind.STABLE: "green",
    StabilityKind.UNSTABLE: "red",
    StabilityKind.CRITICAL: "yellow",
    StabilityKind.INDETERMINATE: "magenta",
}


def format_float(value: float, digits: int = 6) -> str:
    return f"{value:.{digits}g}"


def print_solve_result(result: SolveResult) -> None:
    """Print a solve summary in a panel."""
    table = Table(show_header=False, box=box.SIMPLE)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("s", format_float(result.params.s))
    table.add_row("ω", format_float(result.params.omega))
    table.add_row("Grid points", str(result.profile.grid.n_points))
    table.add_row("Iterations", str(result.iterations))
    status = "[green]yes[/green]" if result.converged else "[red]no[/red]"
    table.add_row("Converged", status)
    table.add_row("max φ", format_float(float(result.profile.values.max()), 12))
    table.add_row("min φ", format_float(float(result.profile.values.min()), 12))
    table.add_row("RES", f"{result.final_res:.3e}")
    if result.iterations:
        table.add_row("Error", f"{result.trace.error_n[-1]:.3e}")
        table.add_row("|1 - M|", f"{result.trace.m_gap_n[-1]:.3e}")

    console.print(Panel(table, title="[bold]Petviashvili Solve[/bold]", border_style="blue"))


def print_validation(artifact: ValidationArtifact) -> None:
    """Print a validation report."""
    table = Table(show_header=False, box=box.SIMPLE)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("Case", artifact.case)
    if artifact.discrepancy is not None:
        table.add_row("sup |φ - φ_exact|", f"{artifact.discrepancy:.3e}")
    if artifact.result is not None and artifact.result.iterations:
        trace = artifact.result.trace
        table.add_row("Error", f"{trace.error_n[-1]:.3e}")
        table.add_row("|1 - M|", f"{trace.m_gap_n[-1]:.3e}")
        table.add_row("RES", f"{trace.res_n[-1]:.3e}")
    if artifact.stokes is not None:
        check = artifact.stokes
        table.add_row("a", format_float(check.amplitude))
        table.add_row("RES(a)", f"{check.res_full:.3e}")
        table.add_row("RES(a/2)", f"{check.res_half:.3e}")
        table.add_row("Ratio", format_float(check.ratio, 4))
    table.add_row("Passed", "[green]yes[/green]" if artifact.passed else "[red]no[/red]")

    console.print(Panel(table, title="[bold]Validation[/bold]", border_style="blue"))


def print_spectral_report(report: SpectralReport, lowest: int = 4) -> None:
    """Print eigenvalue counts and the lowest eigenvalues of L₁, L₂."""
    table = Table(title=f"Linearized spectrum (M = {report.n_modes})", box=box.ROUNDED)
    table.add_column("Operator", style="cyan")
    table.add_column("n", justify="center")
    table.add_column("z", justify="center")
    table.add_column("Lowest eigenvalues", style="yellow")

    for name, eigenvalues, n, z in (
        ("L₁", report.eig_L1, report.n_L1, report.z_L1),
        ("L₂", report.eig_L2, report.n_L2, report.z_L2),
    ):
        shown = ", ".join(f"{value:.6e}" for value in eigenvalues[:lowest])
        table.add_row(name, str(n), str(z), shown)

    console.print(table)
    residuals = report.kernel_residuals
    console.print(
        f"[dim]Kernel residuals: ‖L₂φ‖ {residuals.l2_phi:.2e}, "
        f"‖L₁φ'‖ {residuals.l1_dphi:.2e}, "
        f"‖L₁φ + 2φ³‖ {residuals.l1_phi_plus_2phi3:.2e}; ε = {report.eps_ker:.2e}[/dim]"
    )
    if not report.l2_ground_state_positive:
        print_warning("Ground state of L₂ changes sign")


def print_sweep(sweep: VKSweep, classification: Classification) -> None:
    """Print a sweep summary and its stability verdict."""
    converged = int(sweep.convergence_flags.sum())
    table = Table(show_header=False, box=box.SIMPLE)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")

    left = format_float(sweep.omegas[0] - sweep.delta_omega)
    right = format_float(sweep.omegas[-1])

    table.add_row("s", format_float(sweep.s))
    table.add_row("ω range", f"({left}, {right}]")
    table.add_row("Points", f"{converged} / {len(sweep.omegas)} converged")
    style = _KIND_STYLE[classification.kind]
    table.add_row("Verdict", f"[{style}]{classification.kind.value}[/{style}]")
    if classification.omega_c is not None:
        spread = format_float(classification.omega_c_uncertainty or 0.0, 3)
        table.add_row("ω_c", f"{format_float(classification.omega_c)} ± {spread}")
    if classification.kind == StabilityKind.INDETERMINATE and classification.sign_changes:
        table.add_row(
            "Sign changes", ", ".join(format_float(w) for w in classification.sign_changes)
        )

    console.print(Panel(table, title="[bold]VK Sweep[/bold]", border_style="blue"))


def print_stokes(params: StokesParams, res_norm: float) -> None:
    """Print Stokes wave parameters."""
    table = Table(show_header=False, box=box.SIMPLE)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("a", format_float(params.a))
    table.add_row("s", format_float(params.s))
    table.add_row("γ", format_float(params.gamma, 12))
    table.add_row("ω", format_float(params.omega, 12))
    table.add_row("RES", f"{res_norm:.3e}")
    console.print(Panel(table, title="[bold]Stokes Wave[/bold]", border_style="blue"))


def print_error(message: str) -> None:
    """Print an error message."""
    err_console.print(f"[bold red]Error:[/bold red] {message}")


def print_warning(message: str) -> None:
    """Print a warning message."""
    err_console.print(f"[bold yellow]Warning:[/bold yellow] {message}")


def print_success(message: str) -> None:
    """Print a success message."""
    console.print(f"[bold green]✓[/bold green] {message}")


def create_progress() -> Progress:
    """Create a spinner for single computations."""
    return Progress(
        SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console
    )


def create_sweep_progress() -> Progress:
    """Create a progress bar over sweep points."""
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=console,
    )
