"""Tests for the dnoidal and Stokes wave families."""

import logging
import math

import numpy as np
import pytest

from fnls_waves.core.closed_form import (
    dn_mass,
    dn_solution,
    dn_solution_params,
    stokes_coefficients,
    stokes_gamma,
    stokes_wave,
)
from fnls_waves.core.elliptic import elliptic_K
from fnls_waves.core.errors import BracketError
from fnls_waves.core.models import FractionalParams
from fnls_waves.core.spectral import make_grid, mass, residual, to_spectrum


class TestDnParams:
    @pytest.mark.parametrize("omega", [0.5001, 0.75, 1.0, 5.0, 50.0])
    def test_period_and_relations(self, omega):
        params = dn_solution_params(omega)
        assert abs(params.period - 2 * math.pi) <= 1e-12
        assert params.eta1**2 + params.eta2**2 == pytest.approx(2 * omega, abs=1e-12 * omega)
        recomputed = 2 * math.sqrt(2) * elliptic_K(params.kappa, params.kappa_prime) / params.eta1
        assert recomputed == pytest.approx(2 * math.pi, abs=1e-12)
        assert math.sqrt(omega) < params.eta1 <= math.sqrt(2 * omega)

    def test_modulus_relation(self):
        params = dn_solution_params(1.0)
        kappa_sq = (params.eta1**2 - params.eta2**2) / params.eta1**2
        assert params.kappa**2 == pytest.approx(kappa_sq, abs=1e-12)
        assert params.kappa**2 + params.kappa_prime**2 == pytest.approx(1.0, abs=1e-14)

    def test_steepens_with_frequency(self):
        kappas = [dn_solution_params(omega).kappa for omega in (0.6, 1.0, 2.0, 5.0)]
        assert kappas == sorted(kappas)

    @pytest.mark.parametrize("omega", [0.5, 0.4, 0.1])
    def test_no_wave_at_or_below_threshold(self, omega):
        with pytest.raises(BracketError) as info:
            dn_solution_params(omega)
        low, high = info.value.bracket
        assert low < high == 0.0

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(ValueError):
            dn_solution_params(0.0)


class TestDnSolution:
    def test_extremes(self):
        grid = make_grid(256)
        params = dn_solution_params(1.0)
        wave = dn_solution(grid, 1.0)
        assert wave.values[128] == pytest.approx(params.eta1, rel=1e-14)
        assert wave.values[0] == pytest.approx(params.eta2, rel=1e-12)
        assert np.argmax(wave.values) == 128

    @pytest.mark.parametrize("omega", [0.8, 1.0, 3.0])
    def test_mass_matches_quadrature(self, omega):
        wave = dn_solution(make_grid(512), omega)
        assert dn_mass(omega) == pytest.approx(mass(wave), rel=1e-12)


class TestStokes:
    def test_gamma(self):
        assert stokes_gamma(1.0) == pytest.approx(3.0, rel=1e-15)
        assert stokes_gamma(0.5) == pytest.approx(1.5, rel=1e-15)

    def test_gamma_changes_sign_at_small_order(self):
        assert stokes_gamma(0.3) < 0.0 < stokes_gamma(0.4)

    def test_coefficients_at_one(self):
        c2, c3 = stokes_coefficients(1.0)
        assert c2 == pytest.approx(0.5)
        assert c3 == pytest.approx(0.25)

    def test_zero_amplitude_is_constant(self):
        field, params = stokes_wave(make_grid(32), 0.0, 0.7)
        assert params.omega == 0.5
        assert np.allclose(field.values, math.sqrt(0.5), rtol=0, atol=1e-15)

    def test_fourier_support(self):
        a, s = 0.1, 0.6
        field, params = stokes_wave(make_grid(64), a, s)
        half = to_spectrum(field.values)
        assert np.max(np.abs(half[4:])) <= 1e-15
        assert half[0].real == pytest.approx(math.sqrt(params.omega) - 1.5 * math.sqrt(2) * a**2)
        assert half[1].real == pytest.approx(a / math.sqrt(2))

    @pytest.mark.parametrize("s", [0.6, 1.0])
    def test_residual_is_fourth_order(self, s):
        grid = make_grid(64)
        norms = []
        for a in (0.08, 0.04):
            field, params = stokes_wave(grid, a, s)
            norms.append(residual(field, FractionalParams(s=s, omega=params.omega))[1])
        assert 12.0 <= norms[0] / norms[1] <= 20.0

    def test_approaches_dnoidal_wave(self):
        grid = make_grid(128)
        gaps = []
        for a in (0.02, 0.01):
            field, params = stokes_wave(grid, a, 1.0)
            exact = dn_solution(grid, params.omega)
            gaps.append(float(np.max(np.abs(field.values - exact.values))))
        assert gaps[0] <= 1e-3
        # at least third order in a
        assert gaps[0] / gaps[1] >= 6.0

    def test_warns_above_ceiling(self, caplog):
        with caplog.at_level(logging.WARNING, logger="fnls_waves.core.closed_form"):
            stokes_wave(make_grid(32), 0.3, 1.0)
        assert "may be inaccurate" in caplog.text

    def test_rejects_bad_inputs(self):
        grid = make_grid(32)
        with pytest.raises(ValueError):
            stokes_wave(grid, -0.1, 1.0)
        with pytest.raises(ValueError):
            stokes_wave(grid, 0.1, 0.0)
