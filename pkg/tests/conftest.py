"""Shared fixtures: grids and converged waves cached for the whole session."""

import os
from functools import lru_cache
from typing import Callable

import numpy as np
import pytest

from fnls_waves.core.models import FourierGrid, FractionalParams, RealPeriodicField, SolveResult
from fnls_waves.core.petviashvili import solve_wave
from fnls_waves.core.spectral import make_grid


@lru_cache(maxsize=None)
def _converged_wave(s: float, omega: float, n_points: int) -> SolveResult:
    result = solve_wave(make_grid(n_points), FractionalParams(s=s, omega=omega))
    assert result.converged, f"solver did not converge at s={s}, omega={omega}"
    return result


@pytest.fixture(scope="session")
def wave_factory() -> Callable[[float, float, int], SolveResult]:
    """Converged Petviashvili wave for (s, ω, N), solved once per session."""
    return _converged_wave


@pytest.fixture(scope="session")
def dn_wave() -> SolveResult:
    """The s = 1, ω = 1 wave on 2^10 points."""
    return _converged_wave(1.0, 1.0, 1024)


@pytest.fixture
def grid64() -> FourierGrid:
    return make_grid(64)


@pytest.fixture
def band_limited(grid64: FourierGrid) -> RealPeriodicField:
    """Non-even field with modes |k| <= 5."""
    return RealPeriodicField.from_function(
        grid64, lambda x: 0.7 + np.cos(x) - 0.4 * np.sin(2 * x) + 0.25 * np.cos(5 * x + 0.3)
    )


@pytest.fixture
def isolated(tmp_path, monkeypatch):
    """Run inside an empty directory with no FNLS_* overrides."""
    monkeypatch.chdir(tmp_path)
    for name in list(os.environ):
        if name.upper().startswith("FNLS_"):
            monkeypatch.delenv(name)
    return tmp_path
