"""Frequency sweeps of the wave mass and the Vakhitov–Kolokolov index q = dM/dω."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from fnls_waves.core.closed_form import dn_mass
from fnls_waves.core.errors import FnlsError, SweepError
from fnls_waves.core.models import (
    Classification,
    FractionalParams,
    PetviashviliConfig,
    SolveResult,
    StabilityKind,
    VKSweep,
)
from fnls_waves.core.petviashvili import CONSTANT_THRESHOLD, default_initial_guess, solve
from fnls_waves.core.spectral import make_grid, mass

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[float, bool], None]


def sweep_frequencies(omega_min: float, omega_max: float, steps: int) -> np.ndarray:
    """ω_i = ω_min + iΔω for i = 1..steps: the interval (ω_min, ω_max]."""
    if omega_min < CONSTANT_THRESHOLD:
        raise ValueError(f"omega_min must be >= 1/2, got {omega_min}")
    if omega_max <= omega_min:
        raise ValueError(f"omega_max ({omega_max}) must exceed omega_min ({omega_min})")
    if steps < 2:
        raise ValueError(f"A sweep needs at least 2 steps, got {steps}")
    delta = (omega_max - omega_min) / steps
    return omega_min + delta * np.arange(1, steps + 1)


def _solve_point(
    s: float, omega: float, grid_n: int, cfg: PetviashviliConfig
) -> Tuple[bool, float]:
    """Cold-start solve used by worker processes."""
    grid = make_grid(grid_n)
    p = FractionalParams(s=s, omega=omega)
    try:
        result = solve(default_initial_guess(grid, p), p, cfg)
    except FnlsError as e:
        logger.warning(f"Solve failed at omega={omega:.6g}: {e}")
        return False, math.nan
    return result.converged, mass(result.profile) if result.converged else math.nan


def _sweep_sequential(
    s: float,
    omegas: np.ndarray,
    grid_n: int,
    cfg: PetviashviliConfig,
    progress: Optional[ProgressCallback],
) -> List[Tuple[bool, float]]:
    grid = make_grid(grid_n)
    previous: Optional[SolveResult] = None
    points: List[Tuple[bool, float]] = []

    for omega in omegas:
        p = FractionalParams(s=s, omega=float(omega))
        initial = previous.profile if previous is not None else default_initial_guess(grid, p)
        try:
            result = solve(initial, p, cfg)
        except FnlsError as e:
            logger.warning(f"Solve failed at omega={omega:.6g}: {e}")
            points.append((False, math.nan))
        else:
            if result.converged:
                previous = result
                points.append((True, mass(result.profile)))
            else:
                points.append((False, math.nan))
        if progress is not None:
            progress(float(omega), points[-1][0])

    return points


def _sweep_parallel(
    s: float,
    omegas: np.ndarray,
    grid_n: int,
    cfg: PetviashviliConfig,
    workers: Optional[int],
    progress: Optional[ProgressCallback],
) -> List[Tuple[bool, float]]:
    points: List[Tuple[bool, float]] = []
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(_solve_point, s, float(omega), grid_n, cfg) for omega in omegas
        ]
        for omega, future in zip(omegas, futures):
            points.append(future.result())
            if progress is not None:
                progress(float(omega), points[-1][0])
    return points


def mass_curve(
    s: float,
    omega_min: float,
    omega_max: float,
    steps: int,
    grid_n: int,
    cfg: Optional[PetviashviliConfig] = None,
    parallel: bool = False,
    workers: Optional[int] = None,
    progress: Optional[ProgressCallback] = None,
) -> VKSweep:
    """Solve at every sweep frequency and record ∫φ² dx.

    Sequential sweeps warm-start each point from the last converged profile;
    parallel sweeps cold-start every point in a process pool.
    """
    cfg = cfg or PetviashviliConfig()
    omegas = sweep_frequencies(omega_min, omega_max, steps)
    make_grid(grid_n)  # reject bad sizes before any worker starts

    logger.info(
        f"Sweeping s={s:.4g} over ({omega_min:.6g}, {omega_max:.6g}] in {steps} steps, "
        f"N={grid_n}, {'parallel' if parallel else 'sequential'}"
    )
    if parallel:
        points = _sweep_parallel(s, omegas, grid_n, cfg, workers, progress)
    else:
        points = _sweep_sequential(s, omegas, grid_n, cfg, progress)

    flags = np.array([converged for converged, _ in points], dtype=bool)
    masses = np.array([value for _, value in points], dtype=float)
    if not flags.any():
        raise SweepError(f"No sweep point converged for s={s:.4g}")
    if not flags.all():
        logger.warning(f"{int((~flags).sum())} of {len(flags)} sweep points did not converge")

    return VKSweep(s=s, n_points=grid_n, omegas=omegas, masses=masses, convergence_flags=flags)


def vk_index(sweep: VKSweep) -> VKSweep:
    """Forward differences of the mass on consecutive converged pairs.

    q_i = (m_{i+1} - m_i)/(ω_{i+1} - ω_i) belongs to ω_i; pairs touching a failed
    point are NaN.
    """
    flags = sweep.convergence_flags
    paired = flags[:-1] & flags[1:]
    if not paired.any():
        raise SweepError("VK index needs at least two consecutive converged points")

    with np.errstate(invalid="ignore"):
        q = np.where(paired, np.diff(sweep.masses) / np.diff(sweep.omegas), np.nan)

    filled = VKSweep(
        s=sweep.s,
        n_points=sweep.n_points,
        omegas=sweep.omegas,
        masses=sweep.masses,
        convergence_flags=flags,
        q_values=q,
    )
    verdict = classify(filled)
    if verdict.kind == StabilityKind.CRITICAL:
        filled = filled.model_copy(update={"omega_c": verdict.omega_c})
    return filled


def classify(sweep: VKSweep) -> Classification:
    """Sign pattern of q: stable, unstable, critical with ω_c, or indeterminate."""
    if sweep.q_values is None:
        raise ValueError("Sweep has no VK index; run vk_index first")

    valid = np.isfinite(sweep.q_values)
    if not valid.any():
        return Classification(kind=StabilityKind.INDETERMINATE)

    at = sweep.omegas[:-1][valid]
    signs = np.sign(sweep.q_values[valid])
    changes = np.flatnonzero(signs[1:] != signs[:-1])
    midpoints = [float(0.5 * (at[j] + at[j + 1])) for j in changes]

    if not len(changes):
        if signs[0] > 0:
            return Classification(kind=StabilityKind.STABLE)
        if signs[0] < 0:
            return Classification(kind=StabilityKind.UNSTABLE)
        return Classification(kind=StabilityKind.INDETERMINATE)

    if len(changes) == 1:
        j = int(changes[0])
        if signs[j] < 0 < signs[j + 1]:
            return Classification(
                kind=StabilityKind.CRITICAL,
                omega_c=midpoints[0],
                omega_c_uncertainty=float(at[j + 1] - at[j]),
                sign_changes=midpoints,
            )

    return Classification(kind=StabilityKind.INDETERMINATE, sign_changes=midpoints)


def dn_vk_index(omegas: Sequence[float]) -> np.ndarray:
    """Forward-difference VK index of the exact s = 1 mass at the given frequencies."""
    omegas = np.asarray(omegas, dtype=float)
    masses = np.array([dn_mass(float(omega)) for omega in omegas])
    return np.diff(masses) / np.diff(omegas)
