# File: Validator.py
# Path: /root/pkg/Src/TorsiLimit/Validation/Validator.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 17:50PM

"""Time-domain verification of data-center scenarios on every generator shaft.

Each generator sees the IF-weighted sum of the site power deviations as an
electrical torque disturbance on its infinite-bus-reduced shaft model. A
generator passes when every section's steady stress amplitude stays within its
Goodman allowable, the speed deviation stays within the vibration budget and
the rainflow/Miner damage of the whole run is exactly zero.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from TorsiLimit.Dynamics.ShaftModel import undamped_modes
from TorsiLimit.Dynamics.Simulation import Trajectory, simulate_nonlinear
from TorsiLimit.ErrorHandling import DomainError
from TorsiLimit.Fatigue.Damage import CycleSet, miner_damage, rainflow
from TorsiLimit.Limits.TerminalLimits import GeneratorStudy
from TorsiLimit.Network.InteractionFactors import IFMatrix
from TorsiLimit.Planning.Compliance import (
    WINDOW_S,
    subsynchronous_spectrum,
    window_amplitude_sums,
)
from TorsiLimit.Validation.Scenarios import Scenario

logger = logging.getLogger(__name__)

RELATIVE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SectionVerdict:
    """Stress outcome of one shaft section; stresses in the material's units."""

    label: str
    sigma_a: float
    sigma_m: float
    allowable: float
    transient_peak: float
    damage: float
    cycles: CycleSet = field(default_factory=CycleSet, repr=False)

    @property
    def amplitude_ok(self) -> bool:
        return self.sigma_a <= self.allowable * (1 + RELATIVE_TOLERANCE)

    @property
    def normalized_peak(self) -> float:
        return self.transient_peak / self.allowable if self.allowable > 0 else math.inf

    @property
    def passed(self) -> bool:
        return self.amplitude_ok and self.damage == 0.0


@dataclass(frozen=True)
class GeneratorVerdict:
    """Per-generator verdict of one scenario."""

    generator: str
    scenario: str
    sections: Tuple[SectionVerdict, ...]
    max_freq_dev_hz: float
    delta_f_max: float
    trajectory: Optional[Trajectory] = field(default=None, repr=False)

    @property
    def damage(self) -> float:
        return max((s.damage for s in self.sections), default=0.0)

    @property
    def frequency_ok(self) -> bool:
        return self.max_freq_dev_hz <= self.delta_f_max * (1 + RELATIVE_TOLERANCE)

    @property
    def passed(self) -> bool:
        return self.frequency_ok and all(s.passed for s in self.sections)


@dataclass(frozen=True)
class ExposureRecord:
    """Aggregate subsynchronous exposure of one generator terminal (MW)."""

    generator: str
    exposure_mw: float
    limit_mw: float

    @property
    def exceeds(self) -> bool:
        return self.exposure_mw > self.limit_mw * (1 + RELATIVE_TOLERANCE)


def default_time_step(study: GeneratorStudy, sample_rate_hz: float) -> float:
    """Largest step resolving the stiffest mode (20 steps per period) and the forcing rate."""
    modes = undamped_modes(study.model)
    bound = 2.0 * math.pi / (20.0 * max(modes)) if modes else math.inf
    return min(bound, 1.0 / sample_rate_hz)


def generator_forcing(scenario: Scenario, IF: IFMatrix, generator: str) -> np.ndarray:
    """IF-weighted site power deviation seen by one generator, in MW."""
    weights = IF.clamped()
    row = weights.row_index(generator)
    total = np.zeros(scenario.time.size)
    for bus in scenario.buses:
        factor = weights.values[row, weights.column_index(bus)]
        if not math.isfinite(factor):
            raise DomainError(f"bus {bus}: IF column is invalid")
        total += factor * scenario.deviation(bus)
    return total


def _steady_mask(
    trajectory: Trajectory, ramps: List[Tuple[float, float]], settle_s: float, window_s: float
) -> np.ndarray:
    end = float(trajectory.time[-1])
    mask = trajectory.window_mask(max(0.0, end - window_s), end)
    for start, stop in ramps:
        mask &= ~((trajectory.time >= start) & (trajectory.time < stop + settle_s))
    if not mask.any():
        logger.warning("No settled samples in the trailing window; using the whole window")
        mask = trajectory.window_mask(max(0.0, end - window_s), end)
    return mask


def validate_generator(
    scenario: Scenario,
    IF: IFMatrix,
    study: GeneratorStudy,
    delta_f_max: float = 1.5,
    dt: Optional[float] = None,
    settle_s: float = 5.0,
    window_s: float = WINDOW_S,
) -> GeneratorVerdict:
    """Simulate one generator's shaft under its IF-weighted forcing and judge it."""
    label = f"{scenario.label}/{study.generator}"
    forcing_mw = generator_forcing(scenario, IF, study.generator)
    step = dt if dt is not None else default_time_step(study, scenario.sample_rate_hz)
    T_end = scenario.duration_s
    n_steps = int(round(T_end / step))
    sim_time = np.arange(n_steps + 1) * step
    forcing_pu = np.interp(sim_time, scenario.time, forcing_mw) / study.mva_rating
    trajectory = simulate_nonlinear(study.model, sim_time, forcing_pu, step, n_steps * step, label)

    mask = _steady_mask(trajectory, scenario.ramps(), settle_s, window_s)
    steady = trajectory.stress[mask]
    trailing_mean = steady.mean(axis=0)
    labels = study.shaft.section_labels()
    sections = []
    for r in range(study.shaft.n_sections):
        series = trajectory.stress[:, r]
        cycles = rainflow(series)
        sections.append(
            SectionVerdict(
                label=labels[r],
                sigma_a=float((steady[:, r].max() - steady[:, r].min()) / 2.0),
                sigma_m=float((steady[:, r].max() + steady[:, r].min()) / 2.0),
                allowable=float(study.allowables[r]),
                transient_peak=float(np.max(np.abs(series - trailing_mean[r]))),
                damage=miner_damage(cycles, study.material),
                cycles=cycles,
            )
        )
    verdict = GeneratorVerdict(
        generator=study.generator,
        scenario=scenario.label,
        sections=tuple(sections),
        max_freq_dev_hz=float(np.max(np.abs(trajectory.freq_dev_hz))),
        delta_f_max=delta_f_max,
        trajectory=trajectory,
    )
    logger.info(
        f"{label}: {'PASS' if verdict.passed else 'FAIL'} "
        f"(max |df| {verdict.max_freq_dev_hz:.4f} Hz, D={verdict.damage:.3e})"
    )
    return verdict


def validate_scenario(
    scenario: Scenario,
    IF: IFMatrix,
    studies: Mapping[str, GeneratorStudy],
    delta_f_max: float = 1.5,
    dt: Optional[float] = None,
    settle_s: float = 5.0,
    window_s: float = WINDOW_S,
    max_workers: Optional[int] = None,
) -> List[GeneratorVerdict]:
    """Verdicts for every IF generator that has a shaft study, in IF row order.

    Raises:
        SimulationInstabilityError: propagated with the scenario label
    """
    generators = [g for g in IF.generators if g in studies]
    skipped = [g for g in IF.generators if g not in studies]
    if skipped:
        logger.warning(f"No shaft data for {skipped}; not validated")
    if not generators:
        raise DomainError("no generator with shaft data to validate")

    def run(gen: str) -> GeneratorVerdict:
        return validate_generator(scenario, IF, studies[gen], delta_f_max, dt, settle_s, window_s)

    if max_workers and max_workers > 1 and len(generators) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(run, generators))
    return [run(gen) for gen in generators]


def terminal_exposure(
    scenario: Scenario,
    IF: IFMatrix,
    P_e_max: Mapping[str, float],
    f_sync_hz: float = 60.0,
    window_s: float = WINDOW_S,
) -> Dict[str, ExposureRecord]:
    """IF-weighted sum of each site's worst-window subsynchronous amplitude sum.

    A scenario shorter than one window is analysed as a single window.
    """
    weights = IF.clamped()
    site_sums: Dict[int, float] = {}
    for bus in scenario.buses:
        sums = window_amplitude_sums(scenario.series[bus], scenario.sample_rate_hz, f_sync_hz, window_s)
        if sums.size == 0:
            _, amplitudes = subsynchronous_spectrum(scenario.series[bus], scenario.sample_rate_hz, f_sync_hz)
            sums = np.array([amplitudes.sum()])
        site_sums[bus] = float(sums.max())
    records: Dict[str, ExposureRecord] = {}
    for gen, limit in P_e_max.items():
        if gen not in weights.generators:
            continue
        row = weights.row_index(gen)
        exposure = sum(
            weights.values[row, weights.column_index(bus)] * value
            for bus, value in site_sums.items()
            if weights.is_valid(bus)
        )
        records[gen] = ExposureRecord(generator=gen, exposure_mw=float(exposure), limit_mw=float(limit))
        if records[gen].exceeds:
            logger.warning(f"{gen}: terminal exposure {exposure:.3f} MW exceeds {limit:.3f} MW")
    return records


__all__ = [
    "ExposureRecord",
    "GeneratorVerdict",
    "SectionVerdict",
    "default_time_step",
    "generator_forcing",
    "terminal_exposure",
    "validate_generator",
    "validate_scenario",
]
