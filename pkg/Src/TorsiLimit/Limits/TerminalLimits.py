# File: TerminalLimits.py
# Path: /root/pkg/Src/TorsiLimit/Limits/TerminalLimits.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 15:02PM

"""Maximum allowable electrical-power fluctuation at a generator terminal.

Per frequency, the torsional limit is the allowable stress amplitude divided by
the stress gain of the most exposed section, and the vibration limit is the
frequency-deviation budget divided by the frequency gain. Because the stress
of a multi-tone input is bounded by the sum of its single-tone contributions,
the infimum of the per-frequency curve bounds the SUM of amplitudes of any
subsynchronous fluctuation.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from TorsiLimit.Core.Models import MaterialSpec, ShaftAssembly
from TorsiLimit.Dynamics.ShaftModel import (
    FreqResponseSample,
    LinearShaftModel,
    build_linear_model,
    freq_response,
    frequency_grid,
    mean_section_stress,
    operating_point,
    undamped_modes,
)
from TorsiLimit.ErrorHandling import DomainError
from TorsiLimit.Fatigue.Goodman import GoodmanEnvelope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSettings:
    """Sweep resolution shared by every generator of a study."""

    step_hz: float = 0.05
    refine_step_hz: float = 0.005
    refine_span_hz: float = 0.05


@dataclass(frozen=True)
class GeneratorStudy:
    """Everything needed to evaluate one generator's shaft."""

    generator: str
    shaft: ShaftAssembly
    material: MaterialSpec
    model: LinearShaftModel
    mean_stress: np.ndarray
    allowables: np.ndarray

    @property
    def mva_rating(self) -> float:
        return self.shaft.mva_rating


@dataclass(frozen=True)
class LimitProfile:
    """Per-frequency limits and the multi-frequency bound of one generator (MW)."""

    generator: str
    omegas: np.ndarray
    P_tor_max: np.ndarray
    P_vib_max: np.ndarray
    P_max_curve: np.ndarray
    P_e_max: float
    cap_fraction: float
    mva_rating: float
    delta_f_max: float
    section_limits: np.ndarray = field(repr=False)
    samples: Tuple[FreqResponseSample, ...] = field(default=(), repr=False)
    allowables: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)
    mean_stress: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)
    modes_rad_s: Tuple[float, ...] = ()

    @property
    def f_hz(self) -> np.ndarray:
        return self.omegas / (2.0 * math.pi)

    @property
    def cap_mw(self) -> float:
        return self.cap_fraction * self.mva_rating

    @property
    def P_e_max_fraction(self) -> float:
        return self.P_e_max / self.mva_rating

    @property
    def critical_omega(self) -> float:
        return float(self.omegas[int(np.argmin(self.P_max_curve))])


def prepare_generator_study(
    generator: str,
    shaft: ShaftAssembly,
    material: MaterialSpec,
    P0: float,
    V: float,
    X: float,
    E: float = 1.0,
) -> GeneratorStudy:
    """Solve the operating point, build the model and the section allowables.

    Args:
        generator: Generator id
        shaft: Shaft assembly of the machine
        material: Shaft material (its units select the stress output)
        P0: Electrical output, p.u. machine base
        V: Infinite-bus voltage, p.u.
        X: Reactance to the infinite bus, p.u. machine base
        E: Internal EMF, p.u.
    """
    delta0 = operating_point(P0, V, X, E)
    model = build_linear_model(shaft, E, V, X, delta0, stress_units=material.units)
    mean = mean_section_stress(model)
    envelope = GoodmanEnvelope(material)
    allowables = envelope.allowable_amplitudes(mean)
    logger.info(
        f"{generator}: delta0={math.degrees(delta0):.2f} deg, Ke={model.sync_coeff_Ke:.4f} p.u., "
        f"{shaft.n_sections} sections"
    )
    return GeneratorStudy(
        generator=generator,
        shaft=shaft,
        material=material,
        model=model,
        mean_stress=mean,
        allowables=allowables,
    )


def torsional_limit_curve(
    samples: Sequence[FreqResponseSample], allowables: Sequence[float]
) -> Tuple[np.ndarray, np.ndarray]:
    """Per-omega, per-section limits sigma_ra0^max / G_ri and their per-omega minimum (p.u.).

    Sections with zero gain impose no limit (inf); singular samples give 0.
    With no sections the curve is +inf everywhere.
    """
    allow = np.asarray(allowables, dtype=float)
    gains = np.array([s.stress_gain for s in samples], dtype=float).reshape(len(samples), allow.size)
    limits = np.full(gains.shape, math.inf)
    finite = np.isfinite(gains) & (gains > 0)
    np.divide(np.broadcast_to(allow, gains.shape), gains, out=limits, where=finite)
    limits[np.isinf(gains)] = 0.0
    if allow.size == 0:
        return limits, np.full(len(samples), math.inf)
    return limits, limits.min(axis=1)


def vibration_limit_curve(
    samples: Sequence[FreqResponseSample], delta_f_max: float
) -> np.ndarray:
    """Per-omega limit delta_f_max / |G_f| in p.u.; zero gain is unlimited (capped later)."""
    if not delta_f_max > 0:
        raise DomainError("delta_f_max must be positive")
    gains = np.array([s.freq_gain for s in samples], dtype=float)
    limits = np.full(gains.shape, math.inf)
    np.divide(delta_f_max, gains, out=limits, where=np.isfinite(gains) & (gains > 0))
    limits[np.isinf(gains)] = 0.0
    return limits


def multi_frequency_bound(curve: Sequence[float]) -> float:
    """P_e^max: the infimum of the per-frequency limit curve."""
    values = np.asarray(curve, dtype=float)
    if values.size == 0:
        raise DomainError("limit curve is empty")
    return float(values.min())


def compute_limit_profile(
    study: GeneratorStudy,
    cap_fraction: float = 0.20,
    delta_f_max: float = 1.5,
    grid: GridSettings = GridSettings(),
    max_workers: Optional[int] = None,
) -> LimitProfile:
    """Sweep the subsynchronous band and chain the torsional and vibration limits."""
    if not 0 < cap_fraction <= 1:
        raise DomainError("cap_fraction must lie in (0, 1]")
    model = study.model
    modes = undamped_modes(model)
    omegas = frequency_grid(
        model.shaft.f_sync_hz, grid.step_hz, grid.refine_step_hz, grid.refine_span_hz, modes
    )
    samples = freq_response(model, omegas, max_workers=max_workers)
    mva = study.mva_rating
    section_limits, tor_pu = torsional_limit_curve(samples, study.allowables)
    vib_pu = vibration_limit_curve(samples, delta_f_max)
    cap_mw = cap_fraction * mva
    P_tor = tor_pu * mva
    P_vib = vib_pu * mva
    curve = np.minimum(np.minimum(P_tor, P_vib), cap_mw)
    P_e_max = multi_frequency_bound(curve)
    logger.info(
        f"{study.generator}: P_e^max = {P_e_max:.3f} MW "
        f"({100 * P_e_max / mva:.2f}% of {mva:.1f} MVA) over {omegas.size} grid points"
    )
    return LimitProfile(
        generator=study.generator,
        omegas=omegas,
        P_tor_max=P_tor,
        P_vib_max=P_vib,
        P_max_curve=curve,
        P_e_max=P_e_max,
        cap_fraction=cap_fraction,
        mva_rating=mva,
        delta_f_max=delta_f_max,
        section_limits=section_limits * mva,
        samples=tuple(samples),
        allowables=study.allowables,
        mean_stress=study.mean_stress,
        modes_rad_s=tuple(modes),
    )


def notch_frequencies(profile: LimitProfile) -> List[float]:
    """Omegas (rad/s) of strict local minima of the limit curve."""
    curve = profile.P_max_curve
    idx = [
        i
        for i in range(1, curve.size - 1)
        if curve[i] < curve[i - 1] and curve[i] < curve[i + 1]
    ]
    return [float(profile.omegas[i]) for i in idx]


def _with_damping(shaft: ShaftAssembly, scale_self: np.ndarray, scale_mutual: np.ndarray) -> ShaftAssembly:
    masses = tuple(
        replace(m, self_damping=m.self_damping * float(k)) for m, k in zip(shaft.masses, scale_self)
    )
    sections = tuple(
        replace(s, mutual_damping=s.mutual_damping * float(k))
        for s, k in zip(shaft.sections, scale_mutual)
    )
    return replace(shaft, masses=masses, sections=sections)


def damping_sensitivity(
    study: GeneratorStudy,
    trials: int = 20,
    seed: int = 0,
    max_increase: float = 0.5,
    cap_fraction: float = 0.20,
    delta_f_max: float = 1.5,
    grid: GridSettings = GridSettings(),
) -> List[Dict[str, float]]:
    """Diagnostic: randomly raise damping coefficients and report any drop in P_e^max.

    Returns one record per violating trial; violations are logged, never raised.
    """
    rng = np.random.default_rng(seed)
    base = compute_limit_profile(study, cap_fraction, delta_f_max, grid).P_e_max
    model = study.model
    violations: List[Dict[str, float]] = []
    for trial in range(trials):
        scale_self = 1.0 + max_increase * rng.random(study.shaft.n_masses)
        scale_mutual = 1.0 + max_increase * rng.random(study.shaft.n_sections)
        shaft = _with_damping(study.shaft, scale_self, scale_mutual)
        perturbed_model = build_linear_model(
            shaft, model.E, model.V, model.X, model.delta0, model.stress_units
        )
        perturbed = replace(study, shaft=shaft, model=perturbed_model)
        value = compute_limit_profile(perturbed, cap_fraction, delta_f_max, grid).P_e_max
        if value < base * (1 - 1e-9):
            record = {"trial": float(trial), "base_mw": base, "perturbed_mw": value}
            violations.append(record)
            logger.warning(
                f"{study.generator}: damping increase lowered P_e^max "
                f"{base:.4f} -> {value:.4f} MW (trial {trial})"
            )
    return violations


__all__ = [
    "GeneratorStudy",
    "GridSettings",
    "LimitProfile",
    "compute_limit_profile",
    "damping_sensitivity",
    "multi_frequency_bound",
    "notch_frequencies",
    "prepare_generator_study",
    "torsional_limit_curve",
    "vibration_limit_curve",
]
