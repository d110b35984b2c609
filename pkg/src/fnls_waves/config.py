"""Configuration management for fnls-waves."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class SolverSettings(BaseSettings):
    """Petviashvili solver settings."""

    nu: float = Field(default=1.5, gt=1.0, lt=2.0, description="Stabilizing factor exponent")
    tol: float = Field(default=1e-12, gt=0.0, description="Tolerance for all three monitors")
    max_iter: int = Field(default=500, ge=1, description="Iteration cap per solve")
    enforce_even: bool = Field(default=True, description="Project iterates onto even fields")

    model_config = SettingsConfigDict(env_prefix="FNLS_SOLVER_")


class GridSettings(BaseSettings):
    """Discretization settings for single solves."""

    n_points: int = Field(default=1024, description="Grid points on [-π, π)")

    model_config = SettingsConfigDict(env_prefix="FNLS_GRID_")


class SpectrumSettings(BaseSettings):
    """Linearized-operator report settings."""

    n_modes: int = Field(default=256, ge=1, description="Fourier truncation M")
    kernel_tolerance: float = Field(
        default=1e-6, gt=0.0, description="Zero threshold per unit (1 + ω)"
    )

    model_config = SettingsConfigDict(env_prefix="FNLS_SPECTRUM_")


class SweepSettings(BaseSettings):
    """Frequency sweep settings (desk scale by default)."""

    omega_min: float = Field(default=0.6, ge=0.5, description="Open left end of the sweep")
    omega_max: float = Field(default=10.0, description="Closed right end of the sweep")
    steps: int = Field(default=100, ge=2, description="Number of sweep points")
    n_points: int = Field(default=4096, description="Grid points per solve")
    parallel: bool = Field(default=False, description="Cold-start points in a process pool")
    workers: Optional[int] = Field(default=None, ge=1, description="Process pool size")

    @classmethod
    def full_scale(cls) -> "SweepSettings":
        """(1/2, 50] in 1000 steps on 2^14 points."""
        return cls(omega_min=0.5, omega_max=50.0, steps=1000, n_points=2**14)

    model_config = SettingsConfigDict(env_prefix="FNLS_SWEEP_")


class OutputSettings(BaseSettings):
    """Artifact output settings."""

    format: Literal["json", "csv"] = Field(default="json", description="Artifact format")
    directory: Path = Field(default=Path("."), description="Where default artifact names go")

    model_config = SettingsConfigDict(env_prefix="FNLS_OUTPUT_")


class Config(BaseSettings):
    """Main configuration class."""

    solver: SolverSettings = Field(default_factory=SolverSettings)
    grid: GridSettings = Field(default_factory=GridSettings)
    spectrum: SpectrumSettings = Field(default_factory=SpectrumSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", env_nested_delimiter="__", case_sensitive=False
    )

    @classmethod
    def load_from_yaml(cls, yaml_path: Path) -> "Config":
        """Load configuration from YAML file."""
        import yaml

        if not yaml_path.exists():
            return cls()

        with open(yaml_path, "r") as f:
            data = yaml.safe_load(f)

        return cls(**data if data else {})

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> "Config":
        """Load configuration from file or environment."""
        if config_path and config_path.exists():
            return cls.load_from_yaml(config_path)

        default_paths = [
            Path("fnls.yaml"),
            Path("fnls.yml"),
            Path.home() / ".fnls-waves" / "config.yaml",
        ]

        for path in default_paths:
            if path.exists():
                return cls.load_from_yaml(path)

        return cls()


def get_config(config_path: Optional[Path] = None) -> Config:
    """Get the configuration instance."""
    return Config.load(config_path)
