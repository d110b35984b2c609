"""Linearized operators L₁ = (-Δ)^s + ω - 3φ² and L₂ = (-Δ)^s + ω - φ².

Matrices are written in the orthonormal basis
[1/√(2π), cos kx/√π (k = 1..M), sin kx/√π (k = 1..M)]; for even φ the cosine and
sine blocks decouple.
"""

import logging
import math
from typing import Tuple

import numpy as np
import scipy.linalg

from fnls_waves.core.models import (
    FractionalParams,
    KernelResiduals,
    OperatorKind,
    OperatorMatrix,
    RealPeriodicField,
    SpectralReport,
)
from fnls_waves.core.spectral import (
    derivative,
    fractional_laplacian,
    from_spectrum,
    l2_norm,
    pad_spectrum,
    to_spectrum,
)

logger = logging.getLogger(__name__)

DEFAULT_MODES = 256
DEFAULT_KERNEL_TOLERANCE = 1e-6
_SYMMETRY_TOL = 1e-12
# Below this fraction of ‖φ‖ a kernel residual is reported in absolute terms
_NEGLIGIBLE_NORM = 1e-10

_POTENTIAL_WEIGHT = {OperatorKind.L1: 3.0, OperatorKind.L2: 1.0}


def _square_coefficients(f: RealPeriodicField) -> np.ndarray:
    """Exact coefficients v_0..v_N of f² from a grid twice as fine."""
    n = f.grid.n_points
    fine = from_spectrum(pad_spectrum(to_spectrum(f.values), n, 2), 2 * n)
    coeffs = to_spectrum(fine**2)
    # the fine Nyquist bin holds v_N + v_{-N}
    coeffs[n] *= 0.5
    return coeffs


def build_operator(
    f: RealPeriodicField, p: FractionalParams, which: OperatorKind, n_modes: int = DEFAULT_MODES
) -> OperatorMatrix:
    """Truncated matrix of L₁ or L₂ on modes |k| <= ``n_modes``."""
    which = OperatorKind(which)
    n = f.grid.n_points
    if not 1 <= n_modes <= n // 2:
        raise ValueError(f"n_modes must lie in [1, {n // 2}] for N = {n}, got {n_modes}")

    v = _POTENTIAL_WEIGHT[which] * _square_coefficients(f)
    re, im = v.real, v.imag

    k = np.arange(1, n_modes + 1)
    diff = np.abs(k[:, None] - k[None, :])
    total = k[:, None] + k[None, :]
    sign = np.sign(k[:, None] - k[None, :])

    cos_block = slice(1, n_modes + 1)
    sin_block = slice(n_modes + 1, 2 * n_modes + 1)

    potential = np.zeros((2 * n_modes + 1, 2 * n_modes + 1))
    potential[0, 0] = re[0]
    potential[0, cos_block] = potential[cos_block, 0] = math.sqrt(2.0) * re[k]
    potential[0, sin_block] = potential[sin_block, 0] = -math.sqrt(2.0) * im[k]
    potential[cos_block, cos_block] = re[diff] + re[total]
    potential[sin_block, sin_block] = re[diff] - re[total]
    cross = -im[total] + sign * im[diff]
    potential[cos_block, sin_block] = cross
    potential[sin_block, cos_block] = cross.T

    symbol = k.astype(float) ** (2.0 * p.s) + p.omega
    diagonal = np.concatenate(([p.omega], symbol, symbol))
    entries = np.diag(diagonal) - potential
    return OperatorMatrix(entries=entries, n_modes=n_modes, which=which, params=p)


def _check_symmetric(entries: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(entries))))
    asymmetry = float(np.max(np.abs(entries - entries.T)))
    if asymmetry > _SYMMETRY_TOL * scale:
        raise ValueError(f"Operator matrix is not symmetric (max |A - Aᵀ| = {asymmetry:.3e})")


def spectrum(m: OperatorMatrix) -> np.ndarray:
    """All eigenvalues, ascending."""
    _check_symmetric(m.entries)
    return scipy.linalg.eigh(m.entries, eigvals_only=True)


def _eigenpairs(m: OperatorMatrix) -> Tuple[np.ndarray, np.ndarray]:
    _check_symmetric(m.entries)
    return scipy.linalg.eigh(m.entries)


def basis_coefficients(g: RealPeriodicField, n_modes: int) -> np.ndarray:
    """Coordinates of g in the trigonometric basis, truncated at ``n_modes``."""
    n = g.grid.n_points
    if not 1 <= n_modes <= n // 2:
        raise ValueError(f"n_modes must lie in [1, {n // 2}] for N = {n}, got {n_modes}")
    half = to_spectrum(g.values)
    half[n // 2] *= 0.5
    c = half[1 : n_modes + 1]
    root_pi = math.sqrt(math.pi)
    return np.concatenate(
        ([math.sqrt(2.0 * math.pi) * half[0].real], 2.0 * root_pi * c.real, -2.0 * root_pi * c.imag)
    )


def synthesize(coords: np.ndarray, f: RealPeriodicField) -> RealPeriodicField:
    """Grid values on f's grid of the basis expansion with coordinates ``coords``."""
    n = f.grid.n_points
    n_modes = (len(coords) - 1) // 2
    if len(coords) != 2 * n_modes + 1 or not 1 <= n_modes <= n // 2:
        raise ValueError(f"Coordinate vector of length {len(coords)} does not fit N = {n}")
    root_pi = math.sqrt(math.pi)
    half = np.zeros(n // 2 + 1, dtype=complex)
    half[0] = coords[0] / math.sqrt(2.0 * math.pi)
    half[1 : n_modes + 1] = (coords[1 : n_modes + 1] - 1j * coords[n_modes + 1 :]) / (2.0 * root_pi)
    half[n // 2] = 2.0 * half[n // 2].real
    return RealPeriodicField(values=from_spectrum(half, n), grid=f.grid)


def apply_operator(
    f: RealPeriodicField, p: FractionalParams, which: OperatorKind, g: RealPeriodicField
) -> RealPeriodicField:
    """L g evaluated on the grid, with the potential taken pointwise."""
    weight = _POTENTIAL_WEIGHT[OperatorKind(which)]
    values = (
        fractional_laplacian(g, p.s).values + p.omega * g.values - weight * f.values**2 * g.values
    )
    return RealPeriodicField(values=values, grid=g.grid)


def _relative(numerator: float, denominator: float, reference: float) -> float:
    if denominator <= _NEGLIGIBLE_NORM * max(1.0, reference):
        return numerator
    return numerator / denominator


def kernel_residuals(f: RealPeriodicField, p: FractionalParams) -> KernelResiduals:
    """Relative discrete L² residuals of L₂φ = 0, L₁φ' = 0 and L₁φ = -2φ³."""
    phi_norm = l2_norm(f)
    slope = derivative(f)
    cubed = RealPeriodicField(values=f.values**3, grid=f.grid)

    l2_phi = apply_operator(f, p, OperatorKind.L2, f)
    l1_slope = apply_operator(f, p, OperatorKind.L1, slope)
    l1_phi = apply_operator(f, p, OperatorKind.L1, f)
    l1_phi = RealPeriodicField(values=l1_phi.values + 2.0 * cubed.values, grid=f.grid)

    return KernelResiduals(
        l2_phi=_relative(l2_norm(l2_phi), phi_norm, phi_norm),
        l1_dphi=_relative(l2_norm(l1_slope), l2_norm(slope), phi_norm),
        l1_phi_plus_2phi3=_relative(l2_norm(l1_phi), l2_norm(cubed), phi_norm),
    )


def count_eigenvalues(eigenvalues: np.ndarray, eps_neg: float, eps_ker: float) -> Tuple[int, int]:
    """(n, z): eigenvalues below -eps_neg and within eps_ker of zero."""
    negative = int(np.count_nonzero(eigenvalues < -eps_neg))
    kernel = int(np.count_nonzero(np.abs(eigenvalues) <= eps_ker))
    return negative, kernel


def spectral_report(
    f: RealPeriodicField,
    p: FractionalParams,
    n_modes: int = DEFAULT_MODES,
    kernel_tolerance: float = DEFAULT_KERNEL_TOLERANCE,
) -> SpectralReport:
    """Spectra of L₁ and L₂ around f with negative and kernel counts."""
    eps = kernel_tolerance * (1.0 + p.omega)

    eig_l1 = spectrum(build_operator(f, p, OperatorKind.L1, n_modes))
    eig_l2, vectors = _eigenpairs(build_operator(f, p, OperatorKind.L2, n_modes))
    n_l1, z_l1 = count_eigenvalues(eig_l1, eps, eps)
    n_l2, z_l2 = count_eigenvalues(eig_l2, eps, eps)

    ground = synthesize(vectors[:, 0], f).values
    ground = ground * np.sign(ground[np.argmax(np.abs(ground))])
    ground_positive = bool(np.all(ground > 0.0))

    residuals = kernel_residuals(f, p)
    logger.info(
        f"Spectrum at s={p.s:.4g}, omega={p.omega:.6g}, M={n_modes}: "
        f"(n_L1, z_L1, n_L2, z_L2) = ({n_l1}, {z_l1}, {n_l2}, {z_l2})"
    )
    return SpectralReport(
        params=p,
        n_modes=n_modes,
        eig_L1=eig_l1,
        eig_L2=eig_l2,
        n_L1=n_l1,
        z_L1=z_l1,
        n_L2=n_l2,
        z_L2=z_l2,
        kernel_residuals=residuals,
        eps_ker=eps,
        eps_neg=eps,
        l2_ground_state_positive=ground_positive,
    )
