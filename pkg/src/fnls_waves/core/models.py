"""Data models for fnls-waves."""

import math
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Annotated, Any, List, Literal, Optional, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)

MIN_GRID_POINTS = 8


def _float_array(value: Any) -> np.ndarray:
    if isinstance(value, np.ndarray):
        array = np.array(value, dtype=float)
    else:
        # JSON encodes missing / non-finite entries as null
        array = np.array([np.nan if v is None else v for v in value], dtype=float)
    array.setflags(write=False)
    return array


def _float_matrix(value: Any) -> np.ndarray:
    array = np.array(value, dtype=float)
    array.setflags(write=False)
    return array


def _complex_array(value: Any) -> np.ndarray:
    if isinstance(value, np.ndarray):
        array = np.array(value, dtype=complex)
    else:
        array = np.array([complex(re, im) for re, im in value], dtype=complex)
    array.setflags(write=False)
    return array


def _bool_array(value: Any) -> np.ndarray:
    array = np.array(value, dtype=bool)
    array.setflags(write=False)
    return array


def _floats_to_list(array: np.ndarray) -> List[Optional[float]]:
    return [v if math.isfinite(v) else None for v in array.tolist()]


FloatArray = Annotated[
    np.ndarray,
    BeforeValidator(_float_array),
    PlainSerializer(_floats_to_list, return_type=list, when_used="json"),
]
FloatMatrix = Annotated[
    np.ndarray,
    BeforeValidator(_float_matrix),
    PlainSerializer(lambda a: a.tolist(), return_type=list, when_used="json"),
]
ComplexArray = Annotated[
    np.ndarray,
    BeforeValidator(_complex_array),
    PlainSerializer(
        lambda a: [[c.real, c.imag] for c in a.tolist()], return_type=list, when_used="json"
    ),
]
BoolArray = Annotated[
    np.ndarray,
    BeforeValidator(_bool_array),
    PlainSerializer(lambda a: [bool(v) for v in a.tolist()], return_type=list, when_used="json"),
]


@lru_cache(maxsize=32)
def _grid_nodes(n_points: int) -> np.ndarray:
    nodes = -np.pi + 2.0 * np.pi * np.arange(n_points) / n_points
    nodes.setflags(write=False)
    return nodes


@lru_cache(maxsize=32)
def _grid_wavenumbers(n_points: int) -> np.ndarray:
    # [0, 1, ..., N/2, -N/2+1, ..., -1]: numpy order with the Nyquist bin taken positive
    k = np.fft.fftfreq(n_points, d=1.0 / n_points).round().astype(np.int64)
    k[n_points // 2] = n_points // 2
    k.setflags(write=False)
    return k


class FourierGrid(BaseModel):
    """Uniform grid x_j = -π + 2πj/N on [-π, π) with integer wavenumbers."""

    n_points: int

    model_config = ConfigDict(frozen=True)

    @field_validator("n_points")
    @classmethod
    def _check_points(cls, value: int) -> int:
        if value < MIN_GRID_POINTS or value % 2:
            raise ValueError(f"n_points must be even and >= {MIN_GRID_POINTS}, got {value}")
        return value

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n_points

    @property
    def nodes(self) -> np.ndarray:
        return _grid_nodes(self.n_points)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Wavenumbers in transform ordering, a permutation of -N/2+1..N/2."""
        return _grid_wavenumbers(self.n_points)

    @property
    def half_wavenumbers(self) -> np.ndarray:
        """Non-negative wavenumbers 0..N/2 of the real transform."""
        return np.arange(self.n_points // 2 + 1)


class FractionalParams(BaseModel):
    """Fractional order s and wave frequency ω."""

    s: float = Field(gt=0.0, le=1.0, description="Fractional order")
    omega: float = Field(gt=0.0, description="Wave frequency")

    model_config = ConfigDict(frozen=True)


class RealPeriodicField(BaseModel):
    """Real 2π-periodic field sampled at the grid nodes."""

    values: FloatArray
    grid: FourierGrid

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_values(self) -> "RealPeriodicField":
        if self.values.shape != (self.grid.n_points,):
            raise ValueError(
                f"Field has shape {self.values.shape}, grid has {self.grid.n_points} points"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Field contains non-finite values")
        return self

    @classmethod
    def from_function(cls, grid: FourierGrid, func: Any) -> "RealPeriodicField":
        """Sample a vectorized callable at the grid nodes."""
        return cls(values=np.broadcast_to(func(grid.nodes), grid.nodes.shape), grid=grid)

    @classmethod
    def constant(cls, grid: FourierGrid, value: float) -> "RealPeriodicField":
        return cls(values=np.full(grid.n_points, value), grid=grid)


class SpectralCoeffs(BaseModel):
    """Fourier coefficients c_k of f(x) = Σ_k c_k e^{ikx}, in grid wavenumber order."""

    coeffs: ComplexArray
    grid: FourierGrid

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_length(self) -> "SpectralCoeffs":
        if self.coeffs.shape != (self.grid.n_points,):
            raise ValueError("Coefficient array does not match the grid")
        return self

    def coeff(self, k: int) -> complex:
        """Coefficient of e^{ikx}; -N/2 and N/2 share the Nyquist bin."""
        return complex(self.coeffs[k % self.grid.n_points])


class PetviashviliConfig(BaseModel):
    """Petviashvili iteration settings."""

    nu: float = Field(default=1.5, gt=1.0, lt=2.0, description="Stabilization exponent")
    tol_error: float = Field(default=1e-12, gt=0.0)
    tol_res: float = Field(default=1e-12, gt=0.0)
    tol_m: float = Field(default=1e-12, gt=0.0)
    max_iter: int = Field(default=500, ge=1)
    enforce_even: bool = True

    model_config = ConfigDict(frozen=True)


class ConvergenceTrace(BaseModel):
    """Per-iteration monitors Error(n), |1 - M_n| and RES(n)."""

    error_n: FloatArray = Field(default_factory=lambda: _float_array([]))
    m_gap_n: FloatArray = Field(default_factory=lambda: _float_array([]))
    res_n: FloatArray = Field(default_factory=lambda: _float_array([]))

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_lengths(self) -> "ConvergenceTrace":
        if not len(self.error_n) == len(self.m_gap_n) == len(self.res_n):
            raise ValueError("Trace arrays must share one length")
        return self

    @property
    def iterations(self) -> int:
        return len(self.error_n)


class SolveResult(BaseModel):
    """Profile produced by the Petviashvili solver and its convergence record."""

    profile: RealPeriodicField
    trace: ConvergenceTrace
    converged: bool
    params: FractionalParams
    final_res: float
    factor: float = 1.0

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def iterations(self) -> int:
        return self.trace.iterations


class DnParams(BaseModel):
    """Parameters of the dnoidal wave η₁ dn(η₁x/√2; κ)."""

    eta1: float = Field(gt=0.0)
    eta2: float = Field(gt=0.0)
    kappa: float = Field(ge=0.0, le=1.0, description="Modulus; rounds to 1 for steep waves")
    kappa_prime: float = Field(gt=0.0, le=1.0)
    omega: float = Field(gt=0.0)
    period: float = Field(gt=0.0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_relations(self) -> "DnParams":
        if not self.eta2 < self.eta1:
            raise ValueError("Need 0 < eta2 < eta1")
        if abs(self.eta1**2 + self.eta2**2 - 2.0 * self.omega) > 1e-10 * (1.0 + self.omega):
            raise ValueError("eta1² + eta2² must equal 2ω")
        return self


class StokesParams(BaseModel):
    """Amplitude, order and frequency of a third-order Stokes wave."""

    a: float = Field(ge=0.0)
    s: float = Field(gt=0.0, le=1.0)
    gamma: float
    omega: float

    model_config = ConfigDict(frozen=True)


class OperatorKind(str, Enum):
    """Linearized operator tag."""

    L1 = "L1"
    L2 = "L2"


class OperatorMatrix(BaseModel):
    """Truncated matrix of L1 or L2 in the real trigonometric basis."""

    entries: FloatMatrix
    n_modes: int = Field(ge=1)
    which: OperatorKind
    params: FractionalParams

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_shape(self) -> "OperatorMatrix":
        size = 2 * self.n_modes + 1
        if self.entries.shape != (size, size):
            raise ValueError(f"Expected a {size}x{size} matrix, got {self.entries.shape}")
        return self


class KernelResiduals(BaseModel):
    """Relative discrete L² residuals of the exact kernel identities."""

    l2_phi: float
    l1_dphi: float
    l1_phi_plus_2phi3: float


class SpectralReport(BaseModel):
    """Eigenvalues and counts n(.), z(.) of L1 and L2 around a wave."""

    params: FractionalParams
    n_modes: int
    eig_L1: FloatArray
    eig_L2: FloatArray
    n_L1: int
    z_L1: int
    n_L2: int
    z_L2: int
    kernel_residuals: KernelResiduals
    eps_ker: float
    eps_neg: float
    l2_ground_state_positive: bool

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def counts(self) -> Tuple[int, int, int, int]:
        return (self.n_L1, self.z_L1, self.n_L2, self.z_L2)


class VKSweep(BaseModel):
    """Wave mass over a frequency sweep and its forward-difference VK index."""

    s: float
    n_points: int
    omegas: FloatArray
    masses: FloatArray
    convergence_flags: BoolArray
    q_values: Optional[FloatArray] = None
    omega_c: Optional[float] = None

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_arrays(self) -> "VKSweep":
        n = len(self.omegas)
        if len(self.masses) != n or len(self.convergence_flags) != n:
            raise ValueError("omegas, masses and convergence_flags must share one length")
        if n > 1 and not np.all(np.diff(self.omegas) > 0):
            raise ValueError("omegas must be strictly increasing")
        if self.q_values is not None and len(self.q_values) != max(n - 1, 0):
            raise ValueError("q_values must have one entry fewer than omegas")
        return self

    @property
    def delta_omega(self) -> float:
        return float(self.omegas[1] - self.omegas[0])


class StabilityKind(str, Enum):
    """Sign pattern of the VK index over a sweep."""

    STABLE = "stable"
    UNSTABLE = "unstable"
    CRITICAL = "critical"
    INDETERMINATE = "indeterminate"


class Classification(BaseModel):
    """Stability verdict of a sweep."""

    kind: StabilityKind
    omega_c: Optional[float] = None
    omega_c_uncertainty: Optional[float] = None
    sign_changes: List[float] = Field(default_factory=list)


Subcommand = Literal["solve", "validate", "spectrum", "sweep", "stokes"]


class RunConfig(BaseModel):
    """Fully resolved settings of one CLI invocation."""

    subcommand: Subcommand
    s: float = Field(default=1.0, gt=0.0, le=1.0)
    omega: Optional[float] = Field(default=None, gt=0.0)
    omega_min: Optional[float] = Field(default=None, ge=0.5)
    omega_max: Optional[float] = None
    steps: Optional[int] = Field(default=None, ge=2)
    n_grid: int = 1024
    nu: float = Field(default=1.5, gt=1.0, lt=2.0)
    tol: float = Field(default=1e-12, gt=0.0)
    max_iter: int = Field(default=500, ge=1)
    enforce_even: bool = True
    n_modes: int = Field(default=256, ge=1)
    kernel_tolerance: float = Field(default=1e-6, gt=0.0)
    case: Optional[Literal["dn", "stokes"]] = None
    a: Optional[float] = Field(default=None, ge=0.0)
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    output_format: Literal["json", "csv"] = "json"
    parallel: bool = False
    workers: Optional[int] = Field(default=None, ge=1)

    model_config = ConfigDict(frozen=True)

    @field_validator("n_grid")
    @classmethod
    def _check_grid(cls, value: int) -> int:
        FourierGrid(n_points=value)
        return value

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if self.omega_min is not None and self.omega_max is not None:
            if self.omega_max <= self.omega_min:
                raise ValueError("omega_max must exceed omega_min")
        if self.subcommand == "spectrum" and self.n_modes > self.n_grid // 2:
            raise ValueError(f"n_modes {self.n_modes} exceeds n_grid/2 = {self.n_grid // 2}")
        return self

    def fractional_params(self) -> FractionalParams:
        if self.omega is None:
            raise ValueError("omega is required")
        return FractionalParams(s=self.s, omega=self.omega)

    def petviashvili_config(self) -> PetviashviliConfig:
        return PetviashviliConfig(
            nu=self.nu,
            tol_error=self.tol,
            tol_res=self.tol,
            tol_m=self.tol,
            max_iter=self.max_iter,
            enforce_even=self.enforce_even,
        )
