# File: Goodman.py
# Path: /root/pkg/Src/TorsiLimit/Fatigue/Goodman.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 13:52PM

"""Augmented modified Goodman envelope.

Tensile side: the fatigue line runs from Se at zero mean to zero at Sut.
Compressive side: the fatigue boundary stays at Se. Both are cut by the yield
triangle Sy - |sigma_m|.
"""

import logging
from typing import Sequence

import numpy as np

from TorsiLimit.Core.Models import MaterialSpec
from TorsiLimit.ErrorHandling import YieldExceededError

logger = logging.getLogger(__name__)


class GoodmanEnvelope:
    """Allowable alternating stress as a function of mean stress."""

    def __init__(self, material: MaterialSpec) -> None:
        self.material = material

    def fatigue_boundary(self, sigma_m: float) -> float:
        """Goodman line (tensile) or constant Se (compressive), without yield."""
        se = self.material.endurance_limit_Se
        if sigma_m < 0:
            return se
        return se * (1.0 - sigma_m / self.material.ultimate_Sut)

    def yield_boundary(self, sigma_m: float) -> float:
        return self.material.yield_Sy - abs(sigma_m)

    def allowable_amplitude(self, sigma_m: float) -> float:
        """Largest alternating stress sigma_ra0^max that stays inside the envelope.

        Raises:
            YieldExceededError: if |sigma_m| >= Sy
        """
        if abs(sigma_m) >= self.material.yield_Sy:
            raise YieldExceededError(sigma_m, self.material.yield_Sy)
        bound = min(self.fatigue_boundary(sigma_m), self.yield_boundary(sigma_m))
        return max(0.0, bound)

    def allowable_amplitudes(self, sigma_m: Sequence[float]) -> np.ndarray:
        return np.array([self.allowable_amplitude(float(s)) for s in sigma_m], dtype=float)

    def equivalent_reversed(self, sigma_a: float, sigma_m: float) -> float:
        """Goodman mean-stress correction to a fully reversed amplitude."""
        if sigma_m <= 0:
            return sigma_a
        remaining = 1.0 - sigma_m / self.material.ultimate_Sut
        if remaining <= 0:
            return float("inf")
        return sigma_a / remaining


def allowable_amplitude(sigma_m: float, material: MaterialSpec) -> float:
    """Functional form of GoodmanEnvelope.allowable_amplitude."""
    return GoodmanEnvelope(material).allowable_amplitude(sigma_m)
