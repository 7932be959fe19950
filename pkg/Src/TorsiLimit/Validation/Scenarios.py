# File: Scenarios.py
# Path: /root/pkg/Src/TorsiLimit/Validation/Scenarios.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 17:25PM

"""Synthetic data-center power scenarios: rate-limited idle/compute steps plus tones."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from TorsiLimit.Core.Models import FrequencyComponent
from TorsiLimit.Data.Schemas import ScenarioFile
from TorsiLimit.ErrorHandling import DomainError, InputValidationError

logger = logging.getLogger(__name__)

Interval = Tuple[float, float]


@dataclass(frozen=True)
class Scenario:
    """Per-site power series in MW on one shared time base."""

    label: str
    time: np.ndarray
    series: Dict[int, np.ndarray]
    sample_rate_hz: float
    ramp_intervals: Dict[int, Tuple[Interval, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for bus, values in self.series.items():
            if values.shape != self.time.shape:
                raise DomainError(f"scenario '{self.label}': bus {bus} series off the time base")

    @property
    def buses(self) -> Tuple[int, ...]:
        return tuple(sorted(self.series))

    @property
    def duration_s(self) -> float:
        return self.time.size / self.sample_rate_hz

    def deviation(self, bus: int) -> np.ndarray:
        """Power change relative to the first sample, in MW."""
        values = self.series[bus]
        return values - values[0]

    def ramps(self) -> List[Interval]:
        """All ramp intervals of all sites, sorted by start time."""
        return sorted(iv for ivs in self.ramp_intervals.values() for iv in ivs)

    def scaled(self, factor: float, label: Optional[str] = None) -> "Scenario":
        """Scenario whose deviations from the first sample are multiplied by factor."""
        series = {b: v[0] + factor * (v - v[0]) for b, v in self.series.items()}
        return Scenario(
            label=label or f"{self.label}x{factor:g}",
            time=self.time,
            series=series,
            sample_rate_hz=self.sample_rate_hz,
            ramp_intervals=self.ramp_intervals,
        )


def _schedule(time: np.ndarray, levels: Sequence[Tuple[float, float]]) -> np.ndarray:
    """Piecewise-constant target levels; before the first change the first level holds."""
    target = np.zeros(time.size)
    if not levels:
        return target
    ordered = sorted((float(t), float(p)) for t, p in levels)
    target[:] = ordered[0][1]
    for t, p in ordered:
        target[time >= t - 1e-12] = p
    return target


def _rate_limit(target: np.ndarray, ramp_limit: float, dt: float) -> np.ndarray:
    baseline = np.empty_like(target)
    baseline[0] = target[0]
    step = ramp_limit * dt
    for k in range(1, target.size):
        baseline[k] = baseline[k - 1] + np.clip(target[k] - baseline[k - 1], -step, step)
    return baseline


def _ramp_intervals(time: np.ndarray, baseline: np.ndarray, dt: float) -> Tuple[Interval, ...]:
    moving = np.abs(np.diff(baseline)) > 1e-12
    intervals: List[Interval] = []
    start: Optional[int] = None
    for k, flag in enumerate(moving):
        if flag and start is None:
            start = k
        elif not flag and start is not None:
            intervals.append((float(time[start]), float(time[k])))
            start = None
    if start is not None:
        intervals.append((float(time[start]), float(time[-1]) + dt))
    return tuple(intervals)


def synthesize_scenario(
    components: Mapping[int, Sequence[FrequencyComponent]],
    ramp_limit: float,
    duration_s: float,
    sample_rate_hz: float,
    levels: Optional[Mapping[int, Sequence[Tuple[float, float]]]] = None,
    label: str = "scenario",
) -> Scenario:
    """Build per-site series: rate-limited level schedule plus superimposed sinusoids.

    Args:
        components: Tones per site bus; amplitudes in MW
        ramp_limit: Maximum baseline slope, MW/s
        duration_s: Scenario length, s
        sample_rate_hz: Sampling rate, Hz
        levels: Optional (time s, level MW) schedule per site bus
        label: Scenario label

    Raises:
        DomainError: non-positive ramp limit or a tone at or above Nyquist
    """
    if not ramp_limit > 0:
        raise DomainError("ramp limit must be positive")
    if not (duration_s > 0 and sample_rate_hz > 0):
        raise DomainError("duration and sample rate must be positive")
    levels = levels or {}
    n = int(round(duration_s * sample_rate_hz))
    dt = 1.0 / sample_rate_hz
    time = np.arange(n) * dt
    nyquist = sample_rate_hz / 2.0
    series: Dict[int, np.ndarray] = {}
    ramps: Dict[int, Tuple[Interval, ...]] = {}
    for bus in sorted(set(components) | set(levels)):
        baseline = _rate_limit(_schedule(time, levels.get(bus, ())), ramp_limit, dt)
        values = baseline.copy()
        for tone in components.get(bus, ()):
            if tone.f_hz >= nyquist:
                raise DomainError(
                    f"bus {bus}: {tone.f_hz:g} Hz tone at or above Nyquist ({nyquist:g} Hz)"
                )
            values += tone.amplitude * np.sin(tone.omega * time + tone.phase)
        series[bus] = values
        ramps[bus] = _ramp_intervals(time, baseline, dt)
    logger.debug(f"Scenario '{label}': {len(series)} sites, {n} samples at {sample_rate_hz:g} Hz")
    return Scenario(
        label=label, time=time, series=series, sample_rate_hz=sample_rate_hz, ramp_intervals=ramps
    )


def scenario_from_file(record: ScenarioFile, f_sync_hz: float = 60.0) -> Scenario:
    """Scenario described by a validated scenario file.

    Raises:
        InputValidationError: a tone at or above f_sync_hz
    """
    components: Dict[int, List[FrequencyComponent]] = {}
    for i, site in enumerate(record.sites):
        tones = components.setdefault(site.bus, [])
        for k, tone in enumerate(site.tones):
            if tone.freq_hz >= f_sync_hz:
                raise InputValidationError(
                    f"{tone.freq_hz:g} Hz is not subsynchronous (f_sync {f_sync_hz:g} Hz)",
                    field_path=f"sites[{i}].tones[{k}].freq_hz",
                )
            tones.append(
                FrequencyComponent(
                    omega=2.0 * math.pi * tone.freq_hz,
                    amplitude=tone.amplitude_mw,
                    phase=math.radians(tone.phase_deg),
                    omega_sync=2.0 * math.pi * f_sync_hz,
                )
            )
    levels = {site.bus: list(site.levels) for site in record.sites if site.levels}
    return synthesize_scenario(
        components,
        record.ramp_limit_mw_per_s,
        record.duration_s,
        record.sample_rate_hz,
        levels=levels,
        label=record.label,
    )


__all__ = ["Scenario", "scenario_from_file", "synthesize_scenario"]
