"""Tests for Dynamics.ShaftModel."""

import math

import numpy as np
import pytest
from conftest import FBM_MODES_RAD_S

from TorsiLimit.Core.Models import RotorMass, ShaftAssembly, ShaftSection, StressUnits
from TorsiLimit.Dynamics.ShaftModel import (
    build_linear_model,
    equilibrium_angles,
    freq_response,
    frequency_grid,
    mean_section_stress,
    operating_point,
    section_torques,
    stiffness_matrix,
    torsional_modes,
    undamped_modes,
)
from TorsiLimit.ErrorHandling import DomainError
from TorsiLimit.Limits.TerminalLimits import GeneratorStudy


class TestTorsionalModes:
    """Undamped natural frequencies."""

    def test_benchmark_modes(self, fbm_shaft: ShaftAssembly) -> None:
        """The benchmark shaft reproduces its five published torsional modes within 1%."""
        modes = torsional_modes(fbm_shaft)
        assert len(modes) == 5
        for computed, expected in zip(modes, FBM_MODES_RAD_S):
            assert computed == pytest.approx(expected, rel=0.01)

    def test_two_mass_closed_form(self) -> None:
        """w^2 = w_s K (1/2H1 + 1/2H2) for two masses."""
        w_s = 2 * math.pi * 60
        shaft = ShaftAssembly(
            masses=(RotorMass("T", 2.0), RotorMass("G", 1.0, is_generator=True)),
            sections=(ShaftSection(40.0),),
            pole_count=2,
            mva_rating=100.0,
            sync_speed=w_s,
        )
        expected = math.sqrt(w_s * 40.0 * (1 / 4.0 + 1 / 2.0))
        assert torsional_modes(shaft) == pytest.approx([expected])

    def test_single_mass_has_no_torsional_mode(self) -> None:
        shaft = ShaftAssembly(
            masses=(RotorMass("G", 3.0, is_generator=True),),
            sections=(),
            pole_count=2,
            mva_rating=100.0,
            sync_speed=2 * math.pi * 60,
        )
        assert torsional_modes(shaft) == []

    def test_coupled_model_adds_electromechanical_mode(self, fbm_study: GeneratorStudy) -> None:
        """The synchronizing spring lifts the rigid mode to a low-frequency swing mode."""
        modes = undamped_modes(fbm_study.model)
        assert len(modes) == 6
        assert 2 * math.pi * 0.5 < modes[0] < 2 * math.pi * 3.0
        for coupled, free in zip(modes[1:], torsional_modes(fbm_study.shaft)):
            assert coupled >= free * (1 - 1e-9)


class TestLinearModel:
    """State-space assembly."""

    def test_operating_point(self) -> None:
        assert operating_point(0.5, 1.0, 1.0) == pytest.approx(math.asin(0.5))
        with pytest.raises(DomainError, match="transfer limit"):
            operating_point(1.2, 1.0, 1.0)
        with pytest.raises(DomainError):
            operating_point(0.5, 1.0, 0.0)

    def test_matrix_structure(self, fbm_study: GeneratorStudy) -> None:
        """A couples angles to speeds by w_s and B drives only the generator mass."""
        model = fbm_study.model
        n = model.n_masses
        w_s = fbm_study.shaft.sync_speed
        np.testing.assert_allclose(model.A[:n, n:], w_s * np.eye(n))
        np.testing.assert_allclose(model.A[:n, :n], 0.0)
        g = fbm_study.shaft.generator_index
        expected_B = np.zeros(2 * n)
        expected_B[n + g] = -1.0 / (2 * 0.868495)
        np.testing.assert_allclose(model.B, expected_B)
        assert model.C_freq[n + g] == pytest.approx(60.0)

    def test_synchronizing_coefficient(self, fbm_study: GeneratorStudy) -> None:
        model = fbm_study.model
        delta0 = math.asin(0.9 * 0.83)
        assert model.delta0 == pytest.approx(delta0)
        assert model.sync_coeff_Ke == pytest.approx(math.cos(delta0) / 0.83)
        assert model.P0 == pytest.approx(0.9)

    def test_stiffness_matrix_rows_sum_to_zero(self, fbm_shaft: ShaftAssembly) -> None:
        np.testing.assert_allclose(stiffness_matrix(fbm_shaft).sum(axis=1), 0.0, atol=1e-12)

    def test_unstable_angle_rejected(self, fbm_shaft: ShaftAssembly) -> None:
        with pytest.raises(DomainError):
            build_linear_model(fbm_shaft, 1.0, 1.0, 0.83, math.pi / 2)


class TestMeanStress:
    """Steady twist of the loaded shaft."""

    def test_section_torques(self, fbm_shaft: ShaftAssembly) -> None:
        """Turbine torque accumulates toward the generator; the exciter section is unloaded."""
        np.testing.assert_allclose(
            section_torques(fbm_shaft, 0.9), [0.27, 0.504, 0.702, 0.9, 0.0], atol=1e-12
        )

    def test_pu_torque_stress_is_section_torque(self, fbm_study: GeneratorStudy) -> None:
        np.testing.assert_allclose(
            mean_section_stress(fbm_study.model), [0.27, 0.504, 0.702, 0.9, 0.0], atol=1e-9
        )

    def test_equilibrium_is_static(self, fbm_study: GeneratorStudy) -> None:
        """Spring, mechanical and electrical torques balance at the equilibrium angles."""
        shaft = fbm_study.shaft
        angles = equilibrium_angles(shaft, fbm_study.model.delta0, 0.9)
        residual = 0.9 * np.array(shaft.torque_shares()) - stiffness_matrix(shaft) @ angles
        residual[shaft.generator_index] -= 0.9
        np.testing.assert_allclose(residual, 0.0, atol=1e-9)

    def test_si_stress(self, tandem_study: GeneratorStudy) -> None:
        """MPa stresses scale the section torque by the surface-stress coefficient."""
        model = tandem_study.model
        assert model.stress_units == StressUnits.MPA
        mean = mean_section_stress(model)
        K = tandem_study.shaft.sections[0].stiffness_K
        assert mean[0] == pytest.approx(0.8 / K * 83e9 * 0.25 / 3.0 / 1e6)
        assert mean[1] == pytest.approx(0.0, abs=1e-9)


class TestFrequencyGrid:
    """Sweep grid construction."""

    def test_coarse_grid(self) -> None:
        """Points every 0.05 Hz strictly inside (0, f_sync)."""
        f_hz = frequency_grid(60.0) / (2 * math.pi)
        assert f_hz[0] == pytest.approx(0.05)
        assert f_hz[-1] < 60.0
        assert f_hz.size == 1199

    def test_refinement_around_modes(self) -> None:
        """Each mode adds 0.005 Hz points within +/-0.05 Hz, including the mode itself."""
        mode = 2 * math.pi * 15.712
        f_hz = frequency_grid(60.0, modes_rad_s=[mode]) / (2 * math.pi)
        assert np.any(np.isclose(f_hz, 15.712, atol=1e-9))
        near = f_hz[(f_hz > 15.662 - 1e-9) & (f_hz < 15.762 + 1e-9)]
        assert near.size >= 21
        assert np.all(np.diff(f_hz) > 0)

    def test_invalid_steps(self) -> None:
        with pytest.raises(DomainError):
            frequency_grid(60.0, step_hz=0.0)


class TestFreqResponse:
    """Frequency response through the stress and frequency outputs."""

    def test_omega_must_be_subsynchronous(self, fbm_study: GeneratorStudy) -> None:
        with pytest.raises(DomainError):
            freq_response(fbm_study.model, [2 * math.pi * 60])

    def test_resonance_peaks(self, fbm_study: GeneratorStudy) -> None:
        """Stress gain near a torsional mode exceeds the gain between modes."""
        first = undamped_modes(fbm_study.model)[1]
        samples = freq_response(fbm_study.model, [first, 0.8 * first])
        assert max(samples[0].stress_gain) > 10 * max(samples[1].stress_gain)

    def test_threaded_matches_serial(self, fbm_study: GeneratorStudy) -> None:
        omegas = np.linspace(10.0, 370.0, 25)
        serial = freq_response(fbm_study.model, omegas)
        threaded = freq_response(fbm_study.model, omegas, max_workers=4)
        assert serial == threaded

    def test_undamped_pole_is_singular(self) -> None:
        """An undamped shaft at its own mode returns the infinite-gain sentinel."""
        w_s = 2 * math.pi * 60
        shaft = ShaftAssembly(
            masses=(RotorMass("T", 2.0), RotorMass("G", 1.0, is_generator=True)),
            sections=(ShaftSection(40.0),),
            pole_count=2,
            mva_rating=100.0,
            sync_speed=w_s,
        )
        model = build_linear_model(shaft, 1.0, 1.0, 0.5, 0.3)
        pole = undamped_modes(model)[1]
        sample = freq_response(model, [pole])[0]
        assert sample.is_singular
        assert all(math.isinf(g) for g in sample.stress_gain)
