"""Petviashvili iteration for (-Δ)^s φ + ωφ - φ³ = 0."""

import logging
import math
from typing import List, Optional

import numpy as np

from fnls_waves.core.closed_form import STOKES_AMPLITUDE_CEILING, stokes_gamma, stokes_wave
from fnls_waves.core.errors import DegenerateFactorError, NonFiniteIterateError
from fnls_waves.core.models import (
    ConvergenceTrace,
    FourierGrid,
    FractionalParams,
    PetviashviliConfig,
    RealPeriodicField,
    SolveResult,
)
from fnls_waves.core.spectral import (
    dealiased_cube_spectrum,
    fractional_symbol,
    from_spectrum,
    spectral_inner,
    to_spectrum,
)

logger = logging.getLogger(__name__)

CONSTANT_THRESHOLD = 0.5
FALLBACK_MODULATION = 0.2
_DEGENERATE_RATIO = 1e-14


def _factor(half: np.ndarray, cubed: np.ndarray, symbol: np.ndarray) -> float:
    numerator = spectral_inner(symbol * half, half)
    denominator = spectral_inner(cubed, half)
    norm_sq = spectral_inner(half, half)
    if abs(denominator) <= _DEGENERATE_RATIO * norm_sq**2:
        raise DegenerateFactorError(
            f"Stabilizing factor denominator {denominator:.3e} vanished (‖f‖² = {norm_sq:.3e})"
        )
    return numerator / denominator


def stabilizing_factor(f: RealPeriodicField, p: FractionalParams) -> float:
    """M = (((-Δ)^s + ω) f, f) / (f³, f); equals 1 at solutions."""
    n = f.grid.n_points
    half = to_spectrum(f.values)
    symbol = fractional_symbol(n, p.s) + p.omega
    return _factor(half, dealiased_cube_spectrum(half, n), symbol)


def iterate_once(f: RealPeriodicField, p: FractionalParams, nu: float = 1.5) -> RealPeriodicField:
    """One step φ̂ ← M^ν (φ³)^ / (|k|^{2s} + ω)."""
    n = f.grid.n_points
    half = to_spectrum(f.values)
    symbol = fractional_symbol(n, p.s) + p.omega
    cubed = dealiased_cube_spectrum(half, n)
    factor = _factor(half, cubed, symbol)
    return RealPeriodicField(values=from_spectrum(factor**nu * cubed / symbol, n), grid=f.grid)


def default_initial_guess(grid: FourierGrid, p: FractionalParams) -> RealPeriodicField:
    """Starting profile for ``solve``.

    Below the bifurcation point the answer is the constant √ω. Near it the
    Stokes wave with a = √((ω - 1/2)/γ) is used; further out, √(2ω)(1 + 0.2 cos x).
    """
    if p.omega <= CONSTANT_THRESHOLD:
        return RealPeriodicField.constant(grid, math.sqrt(p.omega))

    gamma = stokes_gamma(p.s)
    if gamma > 0.0:
        a = math.sqrt((p.omega - CONSTANT_THRESHOLD) / gamma)
        if a <= STOKES_AMPLITUDE_CEILING:
            field, _ = stokes_wave(grid, a, p.s)
            return field

    logger.info(f"Using cosine fallback guess at s={p.s:.4g}, omega={p.omega:.6g}")
    values = math.sqrt(2.0 * p.omega) * (1.0 + FALLBACK_MODULATION * np.cos(grid.nodes))
    return RealPeriodicField(values=values, grid=grid)


def _even(half: np.ndarray) -> np.ndarray:
    # Real coefficients in the physical convention are exactly the even fields
    return half.real.astype(complex)


def _within_tolerance(error: float, gap: float, res: float, cfg: PetviashviliConfig) -> bool:
    return error <= cfg.tol_error and res <= cfg.tol_res and gap <= cfg.tol_m


def solve(
    initial: RealPeriodicField, p: FractionalParams, cfg: Optional[PetviashviliConfig] = None
) -> SolveResult:
    """Iterate until Error(n), |1 - M_n| and RES(n) all pass, or ``max_iter``.

    All three tolerances are absolute, so a converged result has
    ``final_res <= tol_res``. Non-convergence is reported through ``converged``;
    non-finite iterates raise.
    """
    cfg = cfg or PetviashviliConfig()
    grid = initial.grid
    n = grid.n_points

    if p.omega <= CONSTANT_THRESHOLD:
        logger.info(f"omega={p.omega:.6g} <= 1/2: returning the constant solution")
        return SolveResult(
            profile=RealPeriodicField.constant(grid, math.sqrt(p.omega)),
            trace=ConvergenceTrace(),
            converged=True,
            params=p,
            final_res=0.0,
        )

    symbol = fractional_symbol(n, p.s) + p.omega
    half = to_spectrum(initial.values)
    if cfg.enforce_even:
        half = _even(half)
    values = from_spectrum(half, n)
    cubed = dealiased_cube_spectrum(half, n)

    errors: List[float] = []
    gaps: List[float] = []
    residuals: List[float] = []
    factor = 1.0
    converged = False

    for iteration in range(1, cfg.max_iter + 1):
        factor = _factor(half, cubed, symbol)
        new_half = factor**cfg.nu * cubed / symbol
        if cfg.enforce_even:
            new_half = _even(new_half)
        new_values = from_spectrum(new_half, n)
        if not (math.isfinite(factor) and np.all(np.isfinite(new_values))):
            raise NonFiniteIterateError(iteration)

        new_cubed = dealiased_cube_spectrum(new_half, n)
        res_values = from_spectrum(symbol * new_half - new_cubed, n)

        error = float(np.max(np.abs(new_values - values)))
        gap = abs(1.0 - factor)
        res = float(np.max(np.abs(res_values)))
        errors.append(error)
        gaps.append(gap)
        residuals.append(res)
        logger.debug(
            f"Iteration {iteration}: error={error:.3e}, |1-M|={gap:.3e}, res={res:.3e}"
        )

        half, values, cubed = new_half, new_values, new_cubed
        if _within_tolerance(error, gap, res, cfg):
            converged = True
            break

    final_res = residuals[-1]

    if converged:
        logger.info(
            f"Converged at s={p.s:.4g}, omega={p.omega:.6g} in {len(errors)} iterations "
            f"(res={final_res:.2e})"
        )
    else:
        logger.warning(
            f"No convergence at s={p.s:.4g}, omega={p.omega:.6g} after {cfg.max_iter} iterations "
            f"(error={errors[-1]:.2e}, |1-M|={gaps[-1]:.2e}, res={final_res:.2e})"
        )

    return SolveResult(
        profile=RealPeriodicField(values=values, grid=grid),
        trace=ConvergenceTrace(error_n=errors, m_gap_n=gaps, res_n=residuals),
        converged=converged,
        params=p,
        final_res=final_res,
        factor=factor,
    )


def solve_wave(
    grid: FourierGrid,
    p: FractionalParams,
    cfg: Optional[PetviashviliConfig] = None,
    initial: Optional[RealPeriodicField] = None,
) -> SolveResult:
    """Solve from ``initial`` or from the default guess."""
    return solve(initial if initial is not None else default_initial_guess(grid, p), p, cfg)

