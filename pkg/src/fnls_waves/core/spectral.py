"""Fourier discretization on the periodic interval [-π, π).

Coefficients are physical: a field sampled at x_j = -π + 2πj/N is written
f(x) = Σ_k c_k e^{ikx}, so the forward transform carries 1/N and the phase
(-1)^k of the left endpoint. Even fields therefore have real coefficients.
The functions named ``*_spectrum`` work on the half spectrum k = 0..N/2 of
``scipy.fft.rfft`` and are shared with the solver and operator modules.
"""

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import fft

from fnls_waves.core.models import FourierGrid, FractionalParams, RealPeriodicField, SpectralCoeffs

logger = logging.getLogger(__name__)

# Zero-padding factor (p + 1)/2 for a degree-p product
CUBIC_PADDING = 2


@lru_cache(maxsize=64)
def _phase(length: int) -> np.ndarray:
    phase = np.where(np.arange(length) % 2, -1.0, 1.0)
    phase.setflags(write=False)
    return phase


@lru_cache(maxsize=64)
def _parseval_weights(n_points: int) -> np.ndarray:
    weights = np.full(n_points // 2 + 1, 2.0)
    weights[0] = weights[-1] = 1.0
    weights.setflags(write=False)
    return weights


@lru_cache(maxsize=64)
def fractional_symbol(n_points: int, s: float) -> np.ndarray:
    """Multiplier |k|^{2s} on the half spectrum; the Nyquist bin uses (N/2)^{2s}."""
    symbol = np.arange(n_points // 2 + 1, dtype=float) ** (2.0 * s)
    symbol.setflags(write=False)
    return symbol


def to_spectrum(values: np.ndarray) -> np.ndarray:
    """Half spectrum c_0..c_{N/2} of real grid values."""
    n = values.shape[-1]
    return fft.rfft(values) * _phase(n // 2 + 1) / n


def from_spectrum(half: np.ndarray, n_points: int) -> np.ndarray:
    """Grid values of the real field with half spectrum ``half``."""
    return fft.irfft(half * _phase(n_points // 2 + 1) * n_points, n_points)


def spectral_inner(a: np.ndarray, b: np.ndarray) -> float:
    """L² inner product ∫ f g dx of two real fields from their half spectra."""
    weights = _parseval_weights(2 * (a.shape[-1] - 1))
    return float(2.0 * np.pi * np.sum(weights * (a * np.conj(b)).real))


def pad_spectrum(half: np.ndarray, n_points: int, factor: int) -> np.ndarray:
    """Embed a half spectrum into a grid ``factor`` times finer.

    The Nyquist coefficient is split evenly between ±N/2 so the padded field
    takes the same values at the coarse nodes.
    """
    padded = np.zeros(factor * n_points // 2 + 1, dtype=complex)
    padded[: n_points // 2 + 1] = half
    padded[n_points // 2] *= 0.5
    return padded


def truncate_spectrum(half: np.ndarray, n_points: int) -> np.ndarray:
    """Project a fine half spectrum onto |k| <= N/2; ±N/2 fold into one real bin."""
    out = np.array(half[: n_points // 2 + 1], dtype=complex)
    out[n_points // 2] = 2.0 * out[n_points // 2].real
    return out


def dealiased_cube_spectrum(half: np.ndarray, n_points: int) -> np.ndarray:
    """Half spectrum of the dealiased cube of the field with half spectrum ``half``."""
    fine = CUBIC_PADDING * n_points
    values = from_spectrum(pad_spectrum(half, n_points, CUBIC_PADDING), fine)
    return truncate_spectrum(to_spectrum(values**3), n_points)


def make_grid(n_points: int) -> FourierGrid:
    """Create a Fourier grid; warns when the size is not a power of two."""
    grid = FourierGrid(n_points=n_points)
    if n_points & (n_points - 1):
        logger.warning(f"Grid size {n_points} is not a power of two; transforms will be slower")
    return grid


def forward(f: RealPeriodicField) -> SpectralCoeffs:
    n = f.grid.n_points
    coeffs = fft.fft(f.values) * _phase(n) / n
    coeffs[n // 2] = coeffs[n // 2].real
    return SpectralCoeffs(coeffs=coeffs, grid=f.grid)


def inverse(c: SpectralCoeffs) -> RealPeriodicField:
    n = c.grid.n_points
    values = fft.ifft(c.coeffs * _phase(n) * n).real
    return RealPeriodicField(values=values, grid=c.grid)


def _apply_multiplier(f: RealPeriodicField, multiplier: np.ndarray) -> RealPeriodicField:
    n = f.grid.n_points
    values = from_spectrum(multiplier * to_spectrum(f.values), n)
    return RealPeriodicField(values=values, grid=f.grid)


def fractional_laplacian(f: RealPeriodicField, s: float) -> RealPeriodicField:
    """Apply (-Δ)^s, the Fourier multiplier |k|^{2s}."""
    if not 0.0 < s <= 1.0:
        raise ValueError(f"Fractional order must lie in (0, 1], got {s}")
    return _apply_multiplier(f, fractional_symbol(f.grid.n_points, s))


def derivative(f: RealPeriodicField, order: int = 1) -> RealPeriodicField:
    """Spectral derivative d^order f / dx^order."""
    if order < 0:
        raise ValueError(f"Derivative order must be non-negative, got {order}")
    n = f.grid.n_points
    multiplier = (1j * f.grid.half_wavenumbers) ** order
    if order % 2:
        multiplier[n // 2] = 0.0
    return _apply_multiplier(f, multiplier)


def cube(f: RealPeriodicField) -> RealPeriodicField:
    """Dealiased f³: the exact projection onto the grid's modes for band-limited f."""
    n = f.grid.n_points
    values = from_spectrum(dealiased_cube_spectrum(to_spectrum(f.values), n), n)
    return RealPeriodicField(values=values, grid=f.grid)


def residual_spectrum(half: np.ndarray, p: FractionalParams, n_points: int) -> np.ndarray:
    """Half spectrum of S f = (-Δ)^s f + ωf - f³."""
    symbol = fractional_symbol(n_points, p.s) + p.omega
    return symbol * half - dealiased_cube_spectrum(half, n_points)


def residual(f: RealPeriodicField, p: FractionalParams) -> Tuple[RealPeriodicField, float]:
    """Profile-equation residual S f and its sup-norm."""
    n = f.grid.n_points
    values = from_spectrum(residual_spectrum(to_spectrum(f.values), p, n), n)
    field = RealPeriodicField(values=values, grid=f.grid)
    return field, sup_norm(field)


def integrate(f: RealPeriodicField) -> float:
    """Rectangle-rule integral over one period."""
    return float(f.grid.spacing * np.sum(f.values))


def inner(f: RealPeriodicField, g: RealPeriodicField) -> float:
    return float(f.grid.spacing * np.dot(f.values, g.values))


def l2_norm(f: RealPeriodicField) -> float:
    return float(np.sqrt(inner(f, f)))


def sup_norm(f: RealPeriodicField) -> float:
    return float(np.max(np.abs(f.values)))


def even_part(f: RealPeriodicField) -> RealPeriodicField:
    """(f(x) + f(-x)) / 2; node j reflects to node (N - j) mod N."""
    n = f.grid.n_points
    reflected = f.values[(-np.arange(n)) % n]
    return RealPeriodicField(values=0.5 * (f.values + reflected), grid=f.grid)


def mass(f: RealPeriodicField) -> float:
    """∫ f² dx over one period (not halved)."""
    return inner(f, f)


def charge(f: RealPeriodicField) -> float:
    """F(f) = ½ ∫ f² dx."""
    return 0.5 * mass(f)


def _kinetic(f: RealPeriodicField, s: float) -> float:
    half = to_spectrum(f.values)
    return 0.5 * spectral_inner(fractional_symbol(f.grid.n_points, s) * half, half)


def energy(f: RealPeriodicField, s: float) -> float:
    """E(f) = ½ ∫ |(-Δ)^{s/2} f|² - ¼ ∫ f⁴."""
    return _kinetic(f, s) - 0.25 * float(f.grid.spacing * np.sum(f.values**4))


def lyapunov(f: RealPeriodicField, p: FractionalParams) -> float:
    """G(f) = E(f) + ωF(f); its critical points solve the profile equation."""
    return energy(f, p.s) + p.omega * charge(f)


def quadratic_form(f: RealPeriodicField, p: FractionalParams) -> float:
    """B_ω(f) = ½ ∫ |(-Δ)^{s/2} f|² + ω f²."""
    return _kinetic(f, p.s) + 0.5 * p.omega * mass(f)
