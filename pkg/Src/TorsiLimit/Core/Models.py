# File: Models.py
# Path: /root/pkg/Src/TorsiLimit/Core/Models.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 10:02AM

"""Domain models for TorsiLimit.

Immutable study inputs: shaft assemblies, fatigue materials, network cases and
data-center sites. Everything here is validated on construction and safe to
share across worker threads.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

from TorsiLimit.ErrorHandling import DomainError

DEFAULT_SHEAR_MODULUS_PA = 83e9


class BusType(str, Enum):
    """Power-flow role of a bus."""

    SLACK = "slack"
    PV = "PV"
    PQ = "PQ"


class LoadModel(str, Enum):
    """Static load representation."""

    CONSTANT_POWER = "constant_power"
    CONSTANT_IMPEDANCE = "constant_impedance"


class GeneratorKind(str, Enum):
    """Synchronous machines carry shafts; inverter-based resources do not."""

    SYNC = "sync"
    IBR = "ibr"


class StressUnits(str, Enum):
    """Units a material's strengths are expressed in."""

    MPA = "MPa"
    PA = "Pa"
    PU_TORQUE = "pu_torque"


@dataclass(frozen=True)
class RotorMass:
    """One lumped inertia of a turbine-generator rotor."""

    label: str
    inertia_H: float
    self_damping: float = 0.0
    applies_mech_torque: bool = False
    is_generator: bool = False
    mech_torque_share: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.inertia_H > 0:
            raise DomainError(f"mass '{self.label}': inertia H must be positive")
        if self.self_damping < 0:
            raise DomainError(f"mass '{self.label}': self damping must be >= 0")
        if self.mech_torque_share is not None and self.mech_torque_share < 0:
            raise DomainError(f"mass '{self.label}': torque share must be >= 0")


@dataclass(frozen=True)
class ShaftSection:
    """Massless torsional spring between two adjacent rotor masses."""

    stiffness_K: float
    mutual_damping: float = 0.0
    radius_R: Optional[float] = None
    length_l: Optional[float] = None
    shear_modulus_G: float = DEFAULT_SHEAR_MODULUS_PA

    def __post_init__(self) -> None:
        if not self.stiffness_K > 0:
            raise DomainError("section stiffness K must be positive")
        if self.mutual_damping < 0:
            raise DomainError("section mutual damping must be >= 0")
        if (self.radius_R is None) != (self.length_l is None):
            raise DomainError("section geometry needs both radius and length")
        if self.radius_R is not None and not (
            self.radius_R > 0 and self.length_l is not None and self.length_l > 0
        ):
            raise DomainError("section radius and length must be positive")
        if not self.shear_modulus_G > 0:
            raise DomainError("shear modulus must be positive")

    @property
    def has_geometry(self) -> bool:
        return self.radius_R is not None and self.length_l is not None


@dataclass(frozen=True)
class OperatingPoint:
    """Infinite-bus operating point on the machine base."""

    P0: float
    V: float = 1.0
    E: float = 1.0
    X: Optional[float] = None


@dataclass(frozen=True)
class ShaftAssembly:
    """Ordered chain of N+1 rotor masses joined by N shaft sections."""

    masses: Tuple[RotorMass, ...]
    sections: Tuple[ShaftSection, ...]
    pole_count: int
    mva_rating: float
    sync_speed: float
    label: str = ""
    material: Optional[str] = None
    operating_point: Optional[OperatingPoint] = None

    def __post_init__(self) -> None:
        if len(self.masses) == 0:
            raise DomainError("shaft needs at least one mass")
        if len(self.sections) != len(self.masses) - 1:
            raise DomainError(
                f"shaft '{self.label}': {len(self.masses)} masses need "
                f"{len(self.masses) - 1} sections, got {len(self.sections)}"
            )
        generators = [m for m in self.masses if m.is_generator]
        if len(generators) != 1:
            raise DomainError(
                f"shaft '{self.label}': exactly one generator mass required, "
                f"found {len(generators)}"
            )
        if self.pole_count < 2 or self.pole_count % 2:
            raise DomainError("pole count must be even and >= 2")
        if not self.mva_rating > 0:
            raise DomainError("MVA rating must be positive")
        if not self.sync_speed > 0:
            raise DomainError("synchronous speed must be positive")

    @property
    def n_sections(self) -> int:
        return len(self.sections)

    @property
    def n_masses(self) -> int:
        return len(self.masses)

    @property
    def generator_index(self) -> int:
        return next(i for i, m in enumerate(self.masses) if m.is_generator)

    @property
    def f_sync_hz(self) -> float:
        return self.sync_speed / (2.0 * math.pi)

    @property
    def has_geometry(self) -> bool:
        """True when every section carries radius and length."""
        return all(s.has_geometry for s in self.sections)

    def section_labels(self) -> Tuple[str, ...]:
        return tuple(
            f"{self.masses[r].label}-{self.masses[r + 1].label}"
            for r in range(self.n_sections)
        )

    def torque_shares(self) -> Tuple[float, ...]:
        """Normalized mechanical torque share per mass.

        Explicit shares are used when given; otherwise the turbine torque is
        split equally among masses that carry mechanical torque. A shaft with
        no driven mass takes its prime-mover torque on the generator mass.
        """
        driven = [m.applies_mech_torque for m in self.masses]
        if not any(driven):
            return tuple(1.0 if m.is_generator else 0.0 for m in self.masses)
        explicit = [
            m.mech_torque_share if m.applies_mech_torque else 0.0 for m in self.masses
        ]
        if any(s is not None for s in explicit) and all(
            s is not None for s in explicit
        ):
            weights = [float(s) for s in explicit]  # type: ignore[arg-type]
        else:
            weights = [1.0 if d else 0.0 for d in driven]
        total = sum(weights)
        if total <= 0:
            raise DomainError(f"shaft '{self.label}': torque shares sum to zero")
        return tuple(w / total for w in weights)


@dataclass(frozen=True)
class MaterialSpec:
    """Fatigue strengths and S-N curve of a shaft steel."""

    endurance_limit_Se: float
    ultimate_Sut: float
    yield_Sy: float
    sn_points: Tuple[Tuple[float, float], ...]
    units: StressUnits = StressUnits.MPA
    name: str = ""

    def __post_init__(self) -> None:
        if not 0 < self.endurance_limit_Se <= self.yield_Sy <= self.ultimate_Sut:
            raise DomainError(
                f"material '{self.name}': need 0 < Se <= Sy <= Sut"
            )
        if len(self.sn_points) < 2:
            raise DomainError(f"material '{self.name}': at least two S-N points")
        for (n_a, s_a), (n_b, s_b) in zip(self.sn_points, self.sn_points[1:]):
            if not (n_b > n_a and s_b < s_a):
                raise DomainError(
                    f"material '{self.name}': S-N points must increase in N "
                    "and decrease in S"
                )
        if self.sn_points[0][0] < 1:
            raise DomainError(f"material '{self.name}': cycle counts must be >= 1")
        if self.sn_points[-1][1] < self.endurance_limit_Se:
            raise DomainError(
                f"material '{self.name}': last S-N amplitude below endurance limit"
            )


@dataclass(frozen=True)
class Bus:
    id: int
    type: BusType
    voltage_mag: float = 1.0
    angle: float = 0.0
    shunt: complex = 0j


@dataclass(frozen=True)
class Branch:
    from_bus: int
    to_bus: int
    R: float
    X: float
    B: float = 0.0
    tap: float = 1.0
    in_service: bool = True


@dataclass(frozen=True)
class Generator:
    """Generator connection data on the system MVA base."""

    id: str
    bus: int
    P: float
    V_setpoint: float = 1.0
    armature_Ra: float = 0.0
    subtransient_Xd2: float = 0.2
    kind: GeneratorKind = GeneratorKind.SYNC
    shaft: Optional[str] = None

    @property
    def is_synchronous(self) -> bool:
        return self.kind == GeneratorKind.SYNC


@dataclass(frozen=True)
class Load:
    bus: int
    P: float
    Q: float = 0.0
    model: LoadModel = LoadModel.CONSTANT_POWER


@dataclass(frozen=True)
class DataCenterSite:
    """Existing or candidate AI data-center connection point."""

    bus: int
    rating: float
    existing: bool = False

    def __post_init__(self) -> None:
        if not self.rating > 0:
            raise DomainError(f"data center at bus {self.bus}: rating must be > 0")


@dataclass(frozen=True)
class NetworkCase:
    """Balanced positive-sequence network on a common MVA base."""

    buses: Tuple[Bus, ...]
    branches: Tuple[Branch, ...]
    generators: Tuple[Generator, ...]
    loads: Tuple[Load, ...]
    system_mva: float = 100.0
    datacenters: Tuple[DataCenterSite, ...] = ()
    name: str = ""
    _index: Dict[int, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_index", {bus.id: i for i, bus in enumerate(self.buses)}
        )

    @property
    def bus_ids(self) -> Tuple[int, ...]:
        return tuple(bus.id for bus in self.buses)

    def bus_index(self, bus_id: int) -> int:
        try:
            return self._index[bus_id]
        except KeyError:
            raise DomainError(f"bus {bus_id} is not part of the case") from None

    @property
    def slack_bus(self) -> Bus:
        return next(bus for bus in self.buses if bus.type == BusType.SLACK)

    def generator(self, generator_id: str) -> Generator:
        for gen in self.generators:
            if gen.id == generator_id:
                return gen
        raise DomainError(f"unknown generator '{generator_id}'")

    @property
    def synchronous_generators(self) -> Tuple[Generator, ...]:
        return tuple(g for g in self.generators if g.is_synchronous)

    def total_load_mw(self) -> float:
        """Constant-power plus shunt-conductance load at nominal voltage, in MW."""
        pq = sum(load.P for load in self.loads)
        shunt = sum(bus.shunt.real for bus in self.buses)
        return (pq + shunt) * self.system_mva


@dataclass(frozen=True)
class FrequencyComponent:
    """One subsynchronous fluctuation component P sin(omega t + phase), 0 < omega < omega_sync."""

    omega: float
    amplitude: float
    phase: float = 0.0
    omega_sync: float = 2.0 * math.pi * 60.0

    def __post_init__(self) -> None:
        if not self.omega > 0:
            raise DomainError("component frequency must be positive")
        if not self.omega < self.omega_sync:
            raise DomainError(
                f"component at {self.f_hz:g} Hz is not below the synchronous "
                f"{self.omega_sync / (2.0 * math.pi):g} Hz"
            )
        if self.amplitude < 0:
            raise DomainError("component amplitude must be >= 0")

    @property
    def f_hz(self) -> float:
        return self.omega / (2.0 * math.pi)
