# File: ShaftModel.py
# Path: /root/pkg/Src/TorsiLimit/Dynamics/ShaftModel.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 12:40PM

"""Linearized multi-mass shaft coupled to an infinite bus.

State ordering is (delta_1..delta_n, dw_1..dw_n) with delta in electrical
radians and dw the per-unit speed deviation:

    d(delta_r)/dt = w_s * dw_r
    2 H_r d(dw_r)/dt = Tm_r - Te[r == gen] - spring torques
                       - D_mutual (dw_r - dw_neighbour) - D_self dw_r

Only the synchronizing part of Te is kept in the linear model:
Te = Ke * d(delta_gen) + u with Ke = E V cos(delta0) / X.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh

from TorsiLimit.Core.Models import ShaftAssembly, StressUnits
from TorsiLimit.Core.Units import stress_coefficients
from TorsiLimit.ErrorHandling import DomainError

logger = logging.getLogger(__name__)

SINGULAR_CONDITION = 1e12


@dataclass(frozen=True)
class LinearShaftModel:
    """State-space model of one machine shaft against an infinite bus."""

    A: np.ndarray
    B: np.ndarray
    C_stress: np.ndarray
    C_freq: np.ndarray
    sync_coeff_Ke: float
    shaft: ShaftAssembly
    E: float
    V: float
    X: float
    delta0: float
    stress_units: StressUnits = StressUnits.PU_TORQUE

    @property
    def n_masses(self) -> int:
        return self.shaft.n_masses

    @property
    def n_states(self) -> int:
        return 2 * self.shaft.n_masses

    @property
    def P0(self) -> float:
        """Electrical power at the operating point, p.u. machine base."""
        return self.E * self.V * math.sin(self.delta0) / self.X

    @property
    def Pmax(self) -> float:
        return self.E * self.V / self.X


@dataclass(frozen=True)
class FreqResponseSample:
    """Stress and frequency response to a unit p.u. power sinusoid at omega."""

    omega: float
    stress_gain: Tuple[float, ...]
    stress_phase: Tuple[float, ...]
    freq_gain: float

    @property
    def is_singular(self) -> bool:
        return math.isinf(self.freq_gain)

    @property
    def f_hz(self) -> float:
        return self.omega / (2.0 * math.pi)


def stiffness_matrix(shaft: ShaftAssembly) -> np.ndarray:
    """Tridiagonal spring matrix of the mass chain (p.u. torque per elect-rad)."""
    n = shaft.n_masses
    K = np.zeros((n, n))
    for r, section in enumerate(shaft.sections):
        k = section.stiffness_K
        K[r, r] += k
        K[r + 1, r + 1] += k
        K[r, r + 1] -= k
        K[r + 1, r] -= k
    return K


def damping_matrix(shaft: ShaftAssembly) -> np.ndarray:
    """Mutual (tridiagonal) plus self (diagonal) damping on p.u. speed."""
    n = shaft.n_masses
    D = np.diag([m.self_damping for m in shaft.masses]).astype(float)
    for r, section in enumerate(shaft.sections):
        d = section.mutual_damping
        D[r, r] += d
        D[r + 1, r + 1] += d
        D[r, r + 1] -= d
        D[r + 1, r] -= d
    return D


def inertia_vector(shaft: ShaftAssembly) -> np.ndarray:
    return np.array([2.0 * m.inertia_H for m in shaft.masses], dtype=float)


def operating_point(P0: float, V: float, X: float, E: float = 1.0) -> float:
    """Rotor angle delta0 with P0 = E V sin(delta0) / X."""
    if not X > 0:
        raise DomainError("infinite-bus reactance X must be positive")
    ratio = P0 * X / (E * V)
    if abs(ratio) >= 1.0:
        raise DomainError(
            f"P0={P0:.4g} p.u. exceeds the transfer limit E*V/X={E * V / X:.4g} p.u."
        )
    return math.asin(ratio)


def build_linear_model(
    shaft: ShaftAssembly,
    E: float,
    V: float,
    X: float,
    delta0: float,
    stress_units: StressUnits = StressUnits.PU_TORQUE,
) -> LinearShaftModel:
    """Assemble A, B, C_stress and C_freq for the shaft at the given operating point.

    Args:
        shaft: Validated shaft assembly
        E: Infinite-bus internal EMF magnitude, p.u.
        V: Infinite-bus voltage, p.u.
        X: Reactance between EMF and infinite bus, p.u. machine base
        delta0: Operating rotor angle of the generator mass, rad
        stress_units: Units of the stress outputs (must match the material)

    Returns:
        LinearShaftModel ready for frequency response or simulation
    """
    if not X > 0:
        raise DomainError("reactance X must be positive")
    if abs(delta0) >= math.pi / 2:
        raise DomainError(f"delta0={delta0:.4f} rad has no stable equilibrium")

    n = shaft.n_masses
    g = shaft.generator_index
    Ke = E * V * math.cos(delta0) / X
    M = inertia_vector(shaft)
    K = stiffness_matrix(shaft)
    K[g, g] += Ke
    D = damping_matrix(shaft)

    A = np.zeros((2 * n, 2 * n))
    A[:n, n:] = shaft.sync_speed * np.eye(n)
    A[n:, :n] = -K / M[:, None]
    A[n:, n:] = -D / M[:, None]

    B = np.zeros(2 * n)
    B[n + g] = -1.0 / M[g]

    coefficients = stress_coefficients(shaft, stress_units)
    C_stress = np.zeros((shaft.n_sections, 2 * n))
    for r, c in enumerate(coefficients):
        C_stress[r, r] = c
        C_stress[r, r + 1] = -c

    C_freq = np.zeros(2 * n)
    C_freq[n + g] = shaft.f_sync_hz

    return LinearShaftModel(
        A=A,
        B=B,
        C_stress=C_stress,
        C_freq=C_freq,
        sync_coeff_Ke=Ke,
        shaft=shaft,
        E=E,
        V=V,
        X=X,
        delta0=delta0,
        stress_units=stress_units,
    )


def _positive_root_frequencies(K: np.ndarray, shaft: ShaftAssembly) -> np.ndarray:
    mass = np.diag(inertia_vector(shaft) / shaft.sync_speed)
    eigenvalues = eigh(K, mass, eigvals_only=True)
    return np.sqrt(np.clip(eigenvalues, 0.0, None))


def torsional_modes(shaft: ShaftAssembly) -> List[float]:
    """Undamped torsional natural frequencies (rad/s), ascending, rigid mode dropped."""
    if shaft.n_sections == 0:
        return []
    omegas = _positive_root_frequencies(stiffness_matrix(shaft), shaft)
    return [float(w) for w in np.sort(omegas)[1:]]


def undamped_modes(model: LinearShaftModel) -> List[float]:
    """Undamped frequencies of the coupled model, including the electromechanical mode."""
    K = stiffness_matrix(model.shaft)
    K[model.shaft.generator_index, model.shaft.generator_index] += model.sync_coeff_Ke
    omegas = np.sort(_positive_root_frequencies(K, model.shaft))
    floor = 1e-9 * max(1.0, float(omegas[-1]))
    return [float(w) for w in omegas if w > floor]


def frequency_grid(
    f_sync_hz: float,
    step_hz: float = 0.05,
    refine_step_hz: float = 0.005,
    refine_span_hz: float = 0.05,
    modes_rad_s: Iterable[float] = (),
) -> np.ndarray:
    """Subsynchronous sweep grid in rad/s.

    Coarse points every step_hz over (0, f_sync); each mode adds itself plus
    refine_step_hz spaced points within +/- refine_span_hz.
    """
    if not (step_hz > 0 and refine_step_hz > 0 and refine_span_hz >= 0):
        raise DomainError("grid steps must be positive")
    count = int(math.ceil(f_sync_hz / step_hz))
    coarse = np.arange(1, count + 1) * step_hz
    points = [coarse]
    half_width = int(round(refine_span_hz / refine_step_hz))
    offsets = np.arange(-half_width, half_width + 1) * refine_step_hz
    for omega in modes_rad_s:
        points.append(omega / (2.0 * math.pi) + offsets)
    f_hz = np.concatenate(points)
    edge = 1e-9 * f_sync_hz
    f_hz = f_hz[(f_hz > edge) & (f_hz < f_sync_hz - edge)]
    f_hz = np.unique(np.round(f_hz, 12))
    if f_hz.size == 0:
        raise DomainError("empty frequency grid")
    return 2.0 * math.pi * f_hz


def _response_at(model: LinearShaftModel, omega: float) -> FreqResponseSample:
    n_sections = model.C_stress.shape[0]
    system = 1j * omega * np.eye(model.n_states) - model.A
    with np.errstate(divide="ignore", invalid="ignore"):
        condition = np.linalg.cond(system)
    if not condition <= SINGULAR_CONDITION:
        return _singular_sample(omega, n_sections)
    try:
        x = np.linalg.solve(system, model.B.astype(complex))
    except np.linalg.LinAlgError:
        return _singular_sample(omega, n_sections)
    stress = model.C_stress @ x
    return FreqResponseSample(
        omega=float(omega),
        stress_gain=tuple(float(v) for v in np.abs(stress)),
        stress_phase=tuple(float(v) for v in np.angle(stress)),
        freq_gain=float(abs(model.C_freq @ x)),
    )


def _singular_sample(omega: float, n_sections: int) -> FreqResponseSample:
    return FreqResponseSample(
        omega=float(omega),
        stress_gain=tuple(math.inf for _ in range(n_sections)),
        stress_phase=tuple(0.0 for _ in range(n_sections)),
        freq_gain=math.inf,
    )


def freq_response(
    model: LinearShaftModel,
    omegas: Sequence[float],
    max_workers: Optional[int] = None,
) -> List[FreqResponseSample]:
    """Evaluate (jwI - A)^-1 B through the stress and frequency outputs.

    Samples are independent; max_workers > 1 spreads them over a thread pool.
    Points where the system is numerically singular return the infinite-gain
    sentinel.
    """
    omegas = [float(w) for w in omegas]
    for omega in omegas:
        if not 0 < omega < model.shaft.sync_speed:
            raise DomainError(
                f"omega={omega:.6g} rad/s outside (0, {model.shaft.sync_speed:.6g})"
            )
    if max_workers and max_workers > 1 and len(omegas) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            samples = list(pool.map(lambda w: _response_at(model, w), omegas))
    else:
        samples = [_response_at(model, w) for w in omegas]
    singular = sum(1 for s in samples if s.is_singular)
    if singular:
        logger.debug(f"{singular} frequency samples hit an undamped pole")
    return samples


def equilibrium_angles(shaft: ShaftAssembly, delta0: float, P0: float) -> np.ndarray:
    """Absolute mass angles at the operating point (generator mass at delta0)."""
    torques = section_torques(shaft, P0)
    angles = np.zeros(shaft.n_masses)
    g = shaft.generator_index
    angles[g] = delta0
    for r in range(g - 1, -1, -1):
        angles[r] = angles[r + 1] + torques[r] / shaft.sections[r].stiffness_K
    for r in range(g, shaft.n_sections):
        angles[r + 1] = angles[r] - torques[r] / shaft.sections[r].stiffness_K
    return angles


def mechanical_torques(shaft: ShaftAssembly, P0: float) -> np.ndarray:
    """Steady mechanical torque on each mass, p.u. (sums to P0)."""
    return P0 * np.asarray(shaft.torque_shares(), dtype=float)


def section_torques(shaft: ShaftAssembly, P0: float) -> np.ndarray:
    """Steady torque transmitted by every section, positive from turbine toward generator."""
    net = mechanical_torques(shaft, P0)
    net[shaft.generator_index] -= P0
    return np.cumsum(net)[: shaft.n_sections]


def mean_section_stress(model: LinearShaftModel) -> np.ndarray:
    """Mean operating stress sigma_rm0 of every section."""
    angles = equilibrium_angles(model.shaft, model.delta0, model.P0)
    return model.C_stress[:, : model.n_masses] @ angles
