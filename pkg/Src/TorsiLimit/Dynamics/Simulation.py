# File: Simulation.py
# Path: /root/pkg/Src/TorsiLimit/Dynamics/Simulation.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 13:30PM

"""Time-domain simulation of the multi-mass shaft against an infinite bus.

The nonlinear model uses Te = (E V / X) sin(delta_gen) + u(t); the linear model
replaces the sine by its synchronizing tangent. Both share the fixed-step RK4
engine so trajectories are reproducible bit for bit.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from TorsiLimit.Dynamics.Integrators import integrate_fixed_step
from TorsiLimit.Dynamics.ShaftModel import (
    LinearShaftModel,
    damping_matrix,
    equilibrium_angles,
    inertia_vector,
    mechanical_torques,
    stiffness_matrix,
    undamped_modes,
)
from TorsiLimit.ErrorHandling import DomainError, SimulationInstabilityError

logger = logging.getLogger(__name__)

SPEED_DEVIATION_LIMIT = 0.2


@dataclass(frozen=True)
class StressSummary:
    """Per-section extremes over a window: amplitude and mean as half-range and mid-range."""

    sigma_max: np.ndarray
    sigma_min: np.ndarray

    @property
    def sigma_a(self) -> np.ndarray:
        return (self.sigma_max - self.sigma_min) / 2.0

    @property
    def sigma_m(self) -> np.ndarray:
        return (self.sigma_max + self.sigma_min) / 2.0


@dataclass(frozen=True)
class Trajectory:
    """Sampled states and outputs of one simulation."""

    time: np.ndarray
    delta: np.ndarray
    speed: np.ndarray
    stress: np.ndarray
    freq_dev_hz: np.ndarray
    label: str = ""

    def window_mask(self, start: Optional[float] = None, end: Optional[float] = None) -> np.ndarray:
        lo = self.time[0] if start is None else start
        hi = self.time[-1] if end is None else end
        return (self.time >= lo - 1e-12) & (self.time <= hi + 1e-12)

    def stress_summary(
        self, start: Optional[float] = None, end: Optional[float] = None
    ) -> StressSummary:
        mask = self.window_mask(start, end)
        if not mask.any():
            raise DomainError("empty time window")
        window = self.stress[mask]
        return StressSummary(sigma_max=window.max(axis=0), sigma_min=window.min(axis=0))


def _check_step(model: LinearShaftModel, dt: float) -> None:
    modes = undamped_modes(model)
    if modes:
        bound = 2.0 * math.pi / (20.0 * max(modes))
        if dt > bound * (1 + 1e-9):
            raise DomainError(
                f"dt={dt:.3g} s does not resolve the {max(modes):.1f} rad/s mode "
                f"(need dt <= {bound:.3g} s)"
            )


def simulate(
    model: LinearShaftModel,
    forcing_time: Optional[np.ndarray],
    forcing_pu: Optional[np.ndarray],
    dt: float,
    T_end: float,
    label: str = "",
    linear: bool = False,
    initial_speed: Optional[np.ndarray] = None,
) -> Trajectory:
    """Integrate the shaft from its operating point under electrical forcing.

    Args:
        model: Linear model carrying the shaft, E, V, X and delta0
        forcing_time: Sample times of the forcing, s (None for no forcing)
        forcing_pu: Exogenous electrical torque u(t), p.u. machine base
        dt: Fixed RK4 step, s
        T_end: Final time, s
        label: Scenario label used in diagnostics
        linear: Use the synchronizing-tangent electrical torque
        initial_speed: Optional initial p.u. speed deviations

    Returns:
        Trajectory of angles, speeds, section stresses and frequency deviation
    """
    if not (dt > 0 and T_end > 0):
        raise DomainError("dt and T_end must be positive")
    _check_step(model, dt)
    if forcing_time is not None and forcing_pu is not None:
        forcing_time = np.asarray(forcing_time, dtype=float)
        forcing_pu = np.asarray(forcing_pu, dtype=float)
        if forcing_time.shape != forcing_pu.shape or forcing_time.size < 2:
            raise DomainError("forcing needs matching time and value arrays")
        if np.max(np.diff(forcing_time)) > dt * (1 + 1e-6):
            raise DomainError("forcing must be sampled at least every dt")
    else:
        forcing_time = None

    shaft = model.shaft
    n = shaft.n_masses
    g = shaft.generator_index
    M = inertia_vector(shaft)
    K = stiffness_matrix(shaft)
    D = damping_matrix(shaft)
    Tm = mechanical_torques(shaft, model.P0)
    Pmax = model.Pmax
    Ke = model.sync_coeff_Ke
    P0 = model.P0
    delta0 = model.delta0
    w_s = shaft.sync_speed

    def derivative(t: float, y: np.ndarray) -> np.ndarray:
        delta = y[:n]
        speed = y[n:]
        u = float(np.interp(t, forcing_time, forcing_pu)) if forcing_time is not None else 0.0
        if linear:
            Te = P0 + Ke * (delta[g] - delta0)
        else:
            Te = Pmax * math.sin(delta[g])
        accel = Tm - K @ delta - D @ speed
        accel[g] -= Te + u
        return np.concatenate((w_s * speed, accel / M))

    def guard(t: float, y: np.ndarray) -> None:
        worst = float(np.max(np.abs(y[n:])))
        if not worst <= SPEED_DEVIATION_LIMIT:
            raise SimulationInstabilityError(t, worst, label)

    y0 = np.concatenate(
        (
            equilibrium_angles(shaft, delta0, P0),
            np.zeros(n) if initial_speed is None else np.asarray(initial_speed, dtype=float),
        )
    )
    n_steps = int(round(T_end / dt))
    states = integrate_fixed_step(derivative, y0, dt, n_steps, guard=guard)
    time = np.arange(n_steps + 1) * dt
    delta = states[:, :n]
    speed = states[:, n:]
    stress = delta @ model.C_stress[:, :n].T
    freq = shaft.f_sync_hz * speed[:, g]
    logger.debug(f"Simulated {label or shaft.label}: {n_steps} steps, linear={linear}")
    return Trajectory(
        time=time, delta=delta, speed=speed, stress=stress, freq_dev_hz=freq, label=label
    )


def simulate_nonlinear(
    model: LinearShaftModel,
    forcing_time: Optional[np.ndarray],
    forcing_pu: Optional[np.ndarray],
    dt: float,
    T_end: float,
    label: str = "",
    initial_speed: Optional[np.ndarray] = None,
) -> Trajectory:
    """Full nonlinear swing dynamics with sinusoidal electrical torque."""
    return simulate(model, forcing_time, forcing_pu, dt, T_end, label, False, initial_speed)


def simulate_linear(
    model: LinearShaftModel,
    forcing_time: Optional[np.ndarray],
    forcing_pu: Optional[np.ndarray],
    dt: float,
    T_end: float,
    label: str = "",
    initial_speed: Optional[np.ndarray] = None,
) -> Trajectory:
    """Linearized dynamics matching the state-space model."""
    return simulate(model, forcing_time, forcing_pu, dt, T_end, label, True, initial_speed)


def total_energy(model: LinearShaftModel, delta: np.ndarray, speed: np.ndarray) -> np.ndarray:
    """Kinetic + spring + synchronizing energy; conserved without damping or forcing.

    Accepts single states or (n_t, n) stacks.
    """
    shaft = model.shaft
    H = np.array([m.inertia_H for m in shaft.masses])
    K = stiffness_matrix(shaft)
    Tm = mechanical_torques(shaft, model.P0)
    delta = np.atleast_2d(delta)
    speed = np.atleast_2d(speed)
    kinetic = shaft.sync_speed * np.sum(H * speed**2, axis=1)
    spring = 0.5 * np.einsum("ti,ij,tj->t", delta, K, delta)
    work = delta @ Tm
    electrical = -model.Pmax * np.cos(delta[:, shaft.generator_index])
    return kinetic + spring - work + electrical
