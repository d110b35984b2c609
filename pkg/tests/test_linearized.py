"""Tests for the linearized operators L₁ and L₂."""

import math

import numpy as np
import pytest

from fnls_waves.core.models import FractionalParams, OperatorKind, OperatorMatrix, RealPeriodicField
from fnls_waves.core.linearized import (
    apply_operator,
    basis_coefficients,
    build_operator,
    count_eigenvalues,
    kernel_residuals,
    spectral_report,
    spectrum,
    synthesize,
)
from fnls_waves.core.spectral import derivative, make_grid


def _constant_wave(n_points: int, omega: float) -> RealPeriodicField:
    return RealPeriodicField.constant(make_grid(n_points), math.sqrt(omega))


class TestConstantBranch:
    @pytest.mark.parametrize("s", [0.5, 1.0])
    @pytest.mark.parametrize("omega", [0.4, 0.49, 0.51, 0.6])
    def test_eigenvalues_are_exact(self, s, omega):
        n_modes = 16
        p = FractionalParams(s=s, omega=omega)
        eigs = spectrum(build_operator(_constant_wave(64, omega), p, OperatorKind.L1, n_modes))
        k = np.arange(1, n_modes + 1) ** (2 * s)
        expected = np.sort(np.concatenate(([-2 * omega], k - 2 * omega, k - 2 * omega)))
        assert np.max(np.abs(eigs - expected)) <= 1e-12

    @pytest.mark.parametrize("omega,negative", [(0.4, 1), (0.49, 1), (0.51, 3), (0.6, 3)])
    def test_negative_count_jumps_at_threshold(self, omega, negative):
        report = spectral_report(_constant_wave(64, omega), FractionalParams(s=1, omega=omega), 16)
        assert report.n_L1 == negative
        # L₂ is diagonal with eigenvalues |k|^{2s}: one zero, nothing negative
        assert (report.n_L2, report.z_L2) == (0, 1)

    def test_l2_is_diagonal(self):
        p = FractionalParams(s=0.7, omega=0.8)
        matrix = build_operator(_constant_wave(32, 0.8), p, OperatorKind.L2, 8).entries
        assert np.max(np.abs(matrix - np.diag(np.diag(matrix)))) <= 1e-14


class TestMatrix:
    def test_shape_and_symmetry(self, dn_wave):
        matrix = build_operator(dn_wave.profile, dn_wave.params, OperatorKind.L1, 64)
        assert matrix.entries.shape == (129, 129)
        assert np.max(np.abs(matrix.entries - matrix.entries.T)) <= 1e-12

    def test_even_wave_decouples_blocks(self, dn_wave):
        entries = build_operator(dn_wave.profile, dn_wave.params, OperatorKind.L2, 32).entries
        assert np.max(np.abs(entries[:33, 33:])) <= 1e-13

    def test_matches_pointwise_application(self, dn_wave):
        f, p = dn_wave.profile, dn_wave.params
        g = RealPeriodicField.from_function(
            f.grid, lambda x: np.cos(2 * x) + 0.5 * np.sin(3 * x) - 0.2
        )
        for which in OperatorKind:
            matrix = build_operator(f, p, which, 256)
            product = synthesize(matrix.entries @ basis_coefficients(g, 256), f)
            direct = apply_operator(f, p, which, g)
            scale = np.max(np.abs(direct.values))
            assert np.max(np.abs(product.values - direct.values)) <= 1e-8 * scale

    def test_translation_mode(self, dn_wave):
        f, p = dn_wave.profile, dn_wave.params
        slope = derivative(f)
        matrix = build_operator(f, p, OperatorKind.L1, 256)
        image = synthesize(matrix.entries @ basis_coefficients(slope, 256), f)
        assert np.max(np.abs(image.values)) <= 1e-8 * np.max(np.abs(slope.values))

    def test_basis_round_trip(self, band_limited):
        coords = basis_coefficients(band_limited, 8)
        back = synthesize(coords, band_limited)
        assert np.max(np.abs(back.values - band_limited.values)) <= 1e-14

    def test_rejects_too_many_modes(self, dn_wave):
        with pytest.raises(ValueError):
            build_operator(dn_wave.profile, dn_wave.params, OperatorKind.L1, 513)
        with pytest.raises(ValueError):
            build_operator(dn_wave.profile, dn_wave.params, OperatorKind.L1, 0)

    def test_rejects_nonsymmetric_matrix(self):
        entries = np.eye(3)
        entries[0, 1] = 1.0
        matrix = OperatorMatrix(
            entries=entries,
            n_modes=1,
            which=OperatorKind.L1,
            params=FractionalParams(s=1.0, omega=1.0),
        )
        with pytest.raises(ValueError, match="not symmetric"):
            spectrum(matrix)


def test_count_eigenvalues():
    eigs = np.array([-1.0, -1e-9, 0.0, 2e-7, 0.5])
    assert count_eigenvalues(eigs, 1e-6, 1e-6) == (1, 3)


class TestSpectralReport:
    def test_dnoidal_counts(self, dn_wave):
        report = spectral_report(dn_wave.profile, dn_wave.params)
        assert report.counts == (1, 1, 0, 1)
        assert report.l2_ground_state_positive
        assert report.eps_ker == pytest.approx(2e-6)
        assert len(report.eig_L1) == len(report.eig_L2) == 513

    def test_kernel_residuals(self, dn_wave):
        residuals = kernel_residuals(dn_wave.profile, dn_wave.params)
        assert residuals.l2_phi <= 1e-8
        assert residuals.l1_phi_plus_2phi3 <= 1e-8
        assert residuals.l1_dphi <= 1e-6

    def test_stable_under_truncation(self, dn_wave):
        coarse = spectral_report(dn_wave.profile, dn_wave.params, n_modes=64)
        fine = spectral_report(dn_wave.profile, dn_wave.params, n_modes=128)
        assert coarse.counts == fine.counts
        assert np.max(np.abs(coarse.eig_L1[:4] - fine.eig_L1[:4])) <= 1e-8
        assert np.max(np.abs(coarse.eig_L2[:4] - fine.eig_L2[:4])) <= 1e-8

    def test_fractional_wave_stable_under_truncation(self, wave_factory):
        result = wave_factory(0.8, 2.0, 1024)
        coarse = spectral_report(result.profile, result.params, n_modes=128)
        fine = spectral_report(result.profile, result.params, n_modes=256)
        assert coarse.counts == fine.counts == (1, 1, 0, 1)
        assert np.max(np.abs(coarse.eig_L1[:4] - fine.eig_L1[:4])) <= 1e-8
        assert np.max(np.abs(coarse.eig_L2[:4] - fine.eig_L2[:4])) <= 1e-8

    @pytest.mark.parametrize("s", [0.6, 0.8, 1.0])
    @pytest.mark.parametrize("omega", [1.0, 2.0, 5.0])
    def test_counts_across_parameters(self, wave_factory, s, omega):
        result = wave_factory(s, omega, 1024)
        report = spectral_report(result.profile, result.params)
        assert report.counts == (1, 1, 0, 1)
        residuals = report.kernel_residuals
        assert residuals.l2_phi <= 1e-8
        assert residuals.l1_phi_plus_2phi3 <= 1e-8
        assert residuals.l1_dphi <= 1e-6
