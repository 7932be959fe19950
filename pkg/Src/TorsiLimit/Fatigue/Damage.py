# File: Damage.py
# Path: /root/pkg/Src/TorsiLimit/Fatigue/Damage.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 14:15PM

"""Rainflow cycle extraction and Palmgren-Miner damage accumulation."""

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

import numpy as np
import rainflow as rainflow_counting

from TorsiLimit.Core.Models import MaterialSpec
from TorsiLimit.ErrorHandling import DomainError
from TorsiLimit.Fatigue.Goodman import GoodmanEnvelope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cycle:
    range: float
    mean: float
    count: float

    @property
    def amplitude(self) -> float:
        return self.range / 2.0


@dataclass(frozen=True)
class CycleSet:
    """Counted stress cycles; count is 1.0 for full and 0.5 for half cycles."""

    cycles: Tuple[Cycle, ...] = ()

    def __iter__(self) -> Iterator[Cycle]:
        return iter(self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)

    def __add__(self, other: "CycleSet") -> "CycleSet":
        return CycleSet(self.cycles + other.cycles)

    @property
    def total_count(self) -> float:
        return sum(c.count for c in self.cycles)

    @property
    def half_cycle_count(self) -> int:
        return int(round(2 * self.total_count))

    def full_cycles(self) -> Tuple[Cycle, ...]:
        return tuple(c for c in self.cycles if c.count == 1.0)

    def half_cycles(self) -> Tuple[Cycle, ...]:
        return tuple(c for c in self.cycles if c.count == 0.5)


def rainflow(series: Sequence[float]) -> CycleSet:
    """ASTM E1049 rainflow count; residue is counted as half cycles."""
    values = np.asarray(series, dtype=float)
    if values.size < 2:
        raise DomainError("rainflow needs at least two samples")
    cycles = tuple(
        Cycle(range=float(rng), mean=float(mean), count=float(count))
        for rng, mean, count, _start, _end in rainflow_counting.extract_cycles(values)
        if rng > 0
    )
    return CycleSet(cycles)


class SNCurve:
    """Log-log piecewise-linear S-N curve with an endurance cutoff."""

    def __init__(self, material: MaterialSpec) -> None:
        self.material = material
        points = np.asarray(material.sn_points, dtype=float)
        # ascending in log S for interpolation
        self._log_s = np.log10(points[::-1, 1])
        self._log_n = np.log10(points[::-1, 0])

    def cycles_to_failure(self, amplitude: float) -> float:
        """Cycles to failure N at a fully reversed amplitude.

        Returns inf at or below Se and 1 at or above the stress of the
        smallest-N table point. Between Se and the last table point the final
        segment is extrapolated, never below one cycle.
        """
        if amplitude <= self.material.endurance_limit_Se:
            return math.inf
        if amplitude >= self.material.ultimate_Sut:
            return 1.0
        log_s = math.log10(amplitude)
        if log_s >= self._log_s[-1]:
            return 1.0
        if log_s > self._log_s[0]:
            return max(1.0, 10 ** float(np.interp(log_s, self._log_s, self._log_n)))
        slope = (self._log_n[1] - self._log_n[0]) / (self._log_s[1] - self._log_s[0])
        log_n = self._log_n[0] + slope * (log_s - self._log_s[0])
        return max(1.0, 10 ** float(log_n))


def miner_damage(cycles: CycleSet, material: MaterialSpec) -> float:
    """Palmgren-Miner sum D = sum(n_i / N_i) with Goodman mean-stress correction."""
    envelope = GoodmanEnvelope(material)
    curve = SNCurve(material)
    damage = 0.0
    for cycle in cycles:
        sigma_ar = envelope.equivalent_reversed(cycle.amplitude, cycle.mean)
        n_fail = 1.0 if math.isinf(sigma_ar) else curve.cycles_to_failure(sigma_ar)
        if math.isfinite(n_fail):
            damage += cycle.count / n_fail
    return damage


def is_failure(damage: float) -> bool:
    return damage >= 1.0
