"""Complete elliptic integrals and Jacobi functions by arithmetic-geometric means.

Every function takes the modulus κ and optionally the complementary modulus
κ' = √(1 - κ²). Pass κ' explicitly when κ is within rounding of 1: it is the
quantity the recursions actually consume.
"""

import math
from typing import List, Optional, Tuple, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

# Gauss transformation stops once |a - b| <= _GAUSS_TOL * a (error ~ _GAUSS_TOL²)
_GAUSS_TOL = 1e-8
_GAUSS_STEPS = 13
_AGM_STEPS = 64


def _moduli(kappa: float, kappa_prime: Optional[float]) -> Tuple[float, float]:
    if not 0.0 <= kappa <= 1.0:
        raise ValueError(f"Elliptic modulus must lie in [0, 1), got {kappa}")
    if kappa_prime is None:
        if kappa >= 1.0:
            raise ValueError("Elliptic modulus must be < 1")
        kappa_prime = math.sqrt((1.0 - kappa) * (1.0 + kappa))
    elif not 0.0 < kappa_prime <= 1.0:
        raise ValueError(f"Complementary modulus must lie in (0, 1], got {kappa_prime}")
    return kappa, kappa_prime


def _agm_sequence(a: float, b: float) -> Tuple[List[float], List[float]]:
    """Means a_n and half-differences c_n = (a_{n-1} - b_{n-1})/2 for n >= 1."""
    means, halves = [a], []
    for _ in range(_AGM_STEPS):
        if abs(a - b) <= 4.0 * np.finfo(float).eps * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        means.append(a)
        halves.append(c)
    return means, halves


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    means, _ = _agm_sequence(a, b)
    return means[-1]


def elliptic_K(kappa: float, kappa_prime: Optional[float] = None) -> float:
    """Complete elliptic integral of the first kind, K(κ) = π / (2 AGM(1, κ'))."""
    _, kappa_prime = _moduli(kappa, kappa_prime)
    return math.pi / (2.0 * agm(1.0, kappa_prime))


def elliptic_E(kappa: float, kappa_prime: Optional[float] = None) -> float:
    """Complete elliptic integral of the second kind.

    E = K (1 - Σ_{n>=0} 2^{n-1} c_n²) with c_0 = κ and c_n the AGM half-differences.
    """
    kappa, kappa_prime = _moduli(kappa, kappa_prime)
    means, halves = _agm_sequence(1.0, kappa_prime)
    total = 0.5 * kappa**2
    for n, c in enumerate(halves, start=1):
        total += 2.0 ** (n - 1) * c**2
    return math.pi / (2.0 * means[-1]) * (1.0 - total)


def jacobi_sn_cn_dn(
    u: ArrayLike, kappa: float, kappa_prime: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Jacobi sn, cn, dn by descending Gauss transformation.

    The descending means depend on κ only; the ascending recursion back to
    the original modulus is applied elementwise to ``u``.
    """
    _, kappa_prime = _moduli(kappa, kappa_prime)
    u = np.asarray(u, dtype=float)
    emc = kappa_prime**2

    if emc == 0.0:
        # κ' below the double range: the κ = 1 limit
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech.copy()

    means, roots = [], []
    a = 1.0
    c = 1.0
    for _ in range(_GAUSS_STEPS):
        means.append(a)
        emc = math.sqrt(emc)
        roots.append(emc)
        c = 0.5 * (a + emc)
        if abs(a - emc) <= _GAUSS_TOL * a:
            break
        emc *= a
        a = c

    sn0 = np.sin(c * u)
    cn0 = np.cos(c * u)
    nonzero = sn0 != 0.0

    ratio = cn0 / np.where(nonzero, sn0, 1.0)
    scaled = c * ratio
    dn = np.ones_like(u)
    for mean, root in zip(reversed(means), reversed(roots)):
        ratio = ratio * scaled
        scaled = scaled * dn
        dn = (root + ratio) / (mean + ratio)
        ratio = scaled / mean

    magnitude = 1.0 / np.sqrt(scaled**2 + 1.0)
    sn = np.where(sn0 >= 0.0, magnitude, -magnitude)
    cn = scaled * sn
    sn = np.where(nonzero, sn, sn0)
    cn = np.where(nonzero, cn, cn0)
    dn = np.where(nonzero, dn, 1.0)
    return sn, cn, dn


def jacobi_dn(u: ArrayLike, kappa: float, kappa_prime: Optional[float] = None) -> np.ndarray:
    """Jacobi dn(u; κ), with range [κ', 1] and period 2K(κ)."""
    return jacobi_sn_cn_dn(u, kappa, kappa_prime)[2]
