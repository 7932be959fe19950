"""Tests for Dynamics.Simulation and Dynamics.Integrators."""

import math
from dataclasses import replace

import numpy as np
import pytest

from TorsiLimit.Core.Models import ShaftAssembly
from TorsiLimit.Dynamics.Integrators import integrate_fixed_step, rk4_step
from TorsiLimit.Dynamics.ShaftModel import build_linear_model, mean_section_stress
from TorsiLimit.Dynamics.Simulation import (
    simulate_linear,
    simulate_nonlinear,
    total_energy,
)
from TorsiLimit.ErrorHandling import DomainError, SimulationInstabilityError
from TorsiLimit.Limits.TerminalLimits import GeneratorStudy


def _undamped(shaft: ShaftAssembly) -> ShaftAssembly:
    masses = tuple(replace(m, self_damping=0.0) for m in shaft.masses)
    sections = tuple(replace(s, mutual_damping=0.0) for s in shaft.sections)
    return replace(shaft, masses=masses, sections=sections)


class TestIntegrators:
    """Fixed-step RK4."""

    def test_exponential_decay(self) -> None:
        """RK4 on y' = -y is fourth-order accurate."""
        states = integrate_fixed_step(lambda t, y: -y, np.array([1.0]), 0.01, 100)
        assert states.shape == (101, 1)
        assert states[-1, 0] == pytest.approx(math.exp(-1.0), rel=1e-9)

    def test_single_step(self) -> None:
        y = rk4_step(lambda t, y: np.ones_like(y) * t, 0.0, np.zeros(2), 0.5)
        np.testing.assert_allclose(y, [0.125, 0.125])

    def test_guard_aborts(self) -> None:
        def guard(t: float, y: np.ndarray) -> None:
            if y[0] > 2.0:
                raise RuntimeError("stop")

        with pytest.raises(RuntimeError):
            integrate_fixed_step(lambda t, y: y, np.array([1.0]), 0.1, 100, guard=guard)


class TestSimulation:
    """Shaft trajectories."""

    def test_equilibrium_is_stationary(self, fbm_study: GeneratorStudy) -> None:
        """Without forcing the shaft stays at its operating point."""
        trajectory = simulate_nonlinear(fbm_study.model, None, None, 1e-3, 0.5)
        mean = mean_section_stress(fbm_study.model)
        np.testing.assert_allclose(trajectory.stress, np.tile(mean, (501, 1)), atol=1e-9)
        np.testing.assert_allclose(trajectory.freq_dev_hz, 0.0, atol=1e-12)

    def test_energy_conserved_without_damping(self, fbm_study: GeneratorStudy) -> None:
        """Undamped, unforced motion conserves the shaft energy."""
        model = fbm_study.model
        shaft = _undamped(fbm_study.shaft)
        free = build_linear_model(shaft, model.E, model.V, model.X, model.delta0)
        kick = np.zeros(shaft.n_masses)
        kick[shaft.generator_index] = 1e-3
        trajectory = simulate_nonlinear(free, None, None, 2e-4, 1.0, initial_speed=kick)
        energy = total_energy(free, trajectory.delta, trajectory.speed)
        resting = total_energy(free, trajectory.delta[0], np.zeros(shaft.n_masses))[0]
        injected = energy[0] - resting
        assert injected > 0
        assert np.max(np.abs(energy - energy[0])) <= 1e-4 * injected

    def test_linear_matches_nonlinear_for_small_forcing(self, fbm_study: GeneratorStudy) -> None:
        """The synchronizing-tangent model agrees with the sine model near equilibrium."""
        dt = 1e-3
        time = np.arange(1001) * dt
        forcing = 1e-3 * np.sin(2 * math.pi * 10.0 * time)
        nonlinear = simulate_nonlinear(fbm_study.model, time, forcing, dt, 1.0)
        linear = simulate_linear(fbm_study.model, time, forcing, dt, 1.0)
        deviation = nonlinear.stress - nonlinear.stress[0]
        scale = np.max(np.abs(deviation))
        assert scale > 0
        assert np.max(np.abs(nonlinear.stress - linear.stress)) <= 1e-2 * scale

    def test_forcing_drives_frequency_deviation(self, fbm_study: GeneratorStudy) -> None:
        dt = 1e-3
        time = np.arange(201) * dt
        trajectory = simulate_nonlinear(fbm_study.model, time, np.full(201, 0.01), dt, 0.2)
        # a load increase decelerates the rotor
        assert np.mean(trajectory.freq_dev_hz[100:]) < 0

    def test_instability_guard(self, fbm_study: GeneratorStudy) -> None:
        """Speed deviation beyond 0.2 p.u. aborts with the scenario label."""
        dt = 1e-3
        time = np.arange(2001) * dt
        with pytest.raises(SimulationInstabilityError) as info:
            simulate_nonlinear(fbm_study.model, time, np.full(2001, 50.0), dt, 2.0, label="burst")
        assert info.value.label == "burst"
        assert info.value.speed_deviation > 0.2

    def test_step_must_resolve_stiffest_mode(self, fbm_study: GeneratorStudy) -> None:
        with pytest.raises(DomainError, match="does not resolve"):
            simulate_nonlinear(fbm_study.model, None, None, 5e-3, 1.0)

    def test_forcing_must_be_sampled_every_step(self, fbm_study: GeneratorStudy) -> None:
        time = np.arange(11) * 0.1
        with pytest.raises(DomainError, match="sampled"):
            simulate_nonlinear(fbm_study.model, time, np.zeros(11), 1e-3, 1.0)

    def test_stress_summary(self, fbm_study: GeneratorStudy) -> None:
        """Amplitude is the half-range and mean the mid-range of the window."""
        dt = 1e-3
        time = np.arange(1001) * dt
        forcing = 1e-3 * np.sin(2 * math.pi * 10.0 * time)
        trajectory = simulate_linear(fbm_study.model, time, forcing, dt, 1.0)
        summary = trajectory.stress_summary(0.5, 1.0)
        window = trajectory.stress[trajectory.time >= 0.5 - 1e-12]
        np.testing.assert_allclose(summary.sigma_a, (window.max(0) - window.min(0)) / 2)
        np.testing.assert_allclose(summary.sigma_m, (window.max(0) + window.min(0)) / 2)
        with pytest.raises(DomainError):
            trajectory.stress_summary(5.0, 6.0)
