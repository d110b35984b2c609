"""Exact and asymptotic wave families used as ground truth.

The dnoidal wave η₁ dn(η₁x/√2; κ) solves -φ'' + ωφ - φ³ = 0 when
η₁² + η₂² = 2ω with κ² = (η₁² - η₂²)/η₁², i.e. 2ω = η₁²(1 + κ'²).
The third-order Stokes expansion bifurcates from the constant √ω at ω = 1/2
for every fractional order.
"""

import logging
import math
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from fnls_waves.core.elliptic import elliptic_E, elliptic_K, jacobi_dn
from fnls_waves.core.errors import BracketError
from fnls_waves.core.models import DnParams, FourierGrid, RealPeriodicField, StokesParams

logger = logging.getLogger(__name__)

TARGET_PERIOD = 2.0 * math.pi
STOKES_AMPLITUDE_CEILING = 0.2

# Root search runs over t = log κ'
_LOG_KAPPA_PRIME_MIN = math.log(1e-300)


def _dn_branch(omega: float, log_kappa_prime: float) -> Tuple[float, float, float, float]:
    """(η₁, κ, κ', period) on the dnoidal branch at frequency ω."""
    kappa_prime = math.exp(log_kappa_prime)
    kappa = math.sqrt(-math.expm1(2.0 * log_kappa_prime))
    eta1 = math.sqrt(2.0 * omega / (1.0 + kappa_prime**2))
    period = 2.0 * math.sqrt(2.0) * elliptic_K(kappa, kappa_prime) / eta1
    return eta1, kappa, kappa_prime, period


def dn_solution_params(omega: float) -> DnParams:
    """Parameters of the 2π-periodic dnoidal wave at frequency ω.

    The period grows monotonically from π√2/√ω at κ = 0 to infinity as κ → 1,
    so a root exists exactly when ω > 1/2.
    """
    if omega <= 0.0:
        raise ValueError(f"Frequency must be positive, got {omega}")

    def period_gap(t: float) -> float:
        return _dn_branch(omega, t)[3] - TARGET_PERIOD

    bracket = (_LOG_KAPPA_PRIME_MIN, 0.0)
    low, high = period_gap(bracket[0]), period_gap(bracket[1])
    # at ω = 1/2 the κ = 0 end sits on 2π up to rounding
    if omega <= 0.5 or not (low > 0.0 > high):
        raise BracketError(f"No 2π-periodic dnoidal wave at omega={omega:.6g}", bracket)

    t = brentq(period_gap, bracket[0], bracket[1], xtol=1e-15, rtol=4.0 * np.finfo(float).eps)
    eta1, kappa, kappa_prime, period = _dn_branch(omega, t)
    logger.debug(f"dn params at omega={omega:.6g}: eta1={eta1:.15g}, kappa'={kappa_prime:.6e}")
    return DnParams(
        eta1=eta1,
        eta2=eta1 * kappa_prime,
        kappa=kappa,
        kappa_prime=kappa_prime,
        omega=omega,
        period=period,
    )


def dn_solution(grid: FourierGrid, omega: float) -> RealPeriodicField:
    """Sample η₁ dn(η₁x/√2; κ) at the grid nodes."""
    params = dn_solution_params(omega)
    u = params.eta1 * grid.nodes / math.sqrt(2.0)
    values = params.eta1 * jacobi_dn(u, params.kappa, params.kappa_prime)
    return RealPeriodicField(values=values, grid=grid)


def dn_mass(omega: float) -> float:
    """Exact ∫ φ² dx of the dnoidal wave: 2√2 η₁ E(κ)."""
    params = dn_solution_params(omega)
    return 2.0 * math.sqrt(2.0) * params.eta1 * elliptic_E(params.kappa, params.kappa_prime)


def stokes_gamma(s: float) -> float:
    """Frequency correction γ in ω = 1/2 + a²γ, fixed by solvability at order a³."""
    return 15.0 / 4.0 - 9.0 / (4.0 * (2.0 ** (2.0 * s) - 1.0))


def stokes_coefficients(s: float) -> Tuple[float, float]:
    """Amplitudes of cos 2x in φ₂ and cos 3x in φ₃."""
    d2 = 2.0 ** (2.0 * s) - 1.0
    d3 = 3.0 ** (2.0 * s) - 1.0
    return 3.0 / (2.0 * d2), (1.0 + 9.0 / d2) / (2.0 * d3)


def stokes_wave(grid: FourierGrid, a: float, s: float) -> Tuple[RealPeriodicField, StokesParams]:
    """Third-order Stokes wave √ω + √2(aφ₁ + a²φ₂ + a³φ₃) with ω = 1/2 + a²γ."""
    if a < 0.0:
        raise ValueError(f"Stokes amplitude must be non-negative, got {a}")
    if not 0.0 < s <= 1.0:
        raise ValueError(f"Fractional order must lie in (0, 1], got {s}")
    if a > STOKES_AMPLITUDE_CEILING:
        logger.warning(
            f"Stokes amplitude {a:.3g} exceeds {STOKES_AMPLITUDE_CEILING}; "
            "the expansion may be inaccurate"
        )

    gamma = stokes_gamma(s)
    omega = 0.5 + a**2 * gamma
    if omega <= 0.0:
        raise ValueError(f"Stokes frequency {omega:.6g} is not positive for a={a}, s={s}")
    c2, c3 = stokes_coefficients(s)

    x = grid.nodes
    phi1 = np.cos(x)
    phi2 = -1.5 + c2 * np.cos(2.0 * x)
    phi3 = c3 * np.cos(3.0 * x)
    values = math.sqrt(omega) + math.sqrt(2.0) * (a * phi1 + a**2 * phi2 + a**3 * phi3)

    params = StokesParams(a=a, s=s, gamma=gamma, omega=omega)
    return RealPeriodicField(values=values, grid=grid), params
