# File: Schemas.py
# Path: /root/pkg/Src/TorsiLimit/Data/Schemas.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 11:05AM

"""Pydantic schemas for every JSON file TorsiLimit reads.

Schemas check shape, types and per-record ranges. Cross-record rules raise
InputValidationError directly so the message carries the offending field path.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from TorsiLimit.ErrorHandling import InputValidationError


class _Record(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)


class BusRecord(_Record):
    id: int
    type: Literal["slack", "PV", "PQ"] = "PQ"
    vm: float = Field(default=1.0, gt=0)
    va_deg: float = 0.0
    gs: float = 0.0
    bs: float = 0.0

    @field_validator("type", mode="before")
    @classmethod
    def normalize_type(cls, v: Any) -> Any:
        if isinstance(v, str):
            lookup = {"slack": "slack", "pv": "PV", "pq": "PQ"}
            return lookup.get(v.lower(), v)
        return v


class BranchRecord(_Record):
    from_bus: int = Field(alias="from")
    to_bus: int = Field(alias="to")
    r: float = Field(default=0.0, ge=0)
    x: float = 0.0
    b: float = 0.0
    tap: float = Field(default=1.0, gt=0)
    in_service: bool = True

    @model_validator(mode="after")
    def nonzero_impedance(self) -> "BranchRecord":
        if self.r == 0 and self.x == 0:
            raise ValueError("branch impedance r + jx must be nonzero")
        if self.from_bus == self.to_bus:
            raise ValueError("branch endpoints must differ")
        return self


class GeneratorRecord(_Record):
    id: Optional[str] = None
    bus: int
    p: float = 0.0
    vset: float = Field(default=1.0, gt=0)
    ra: float = Field(default=0.0, ge=0)
    xd2: float = Field(default=0.2, ge=0)
    kind: Literal["sync", "ibr"] = "sync"
    shaft: Optional[str] = None


class LoadRecord(_Record):
    bus: int
    p: float
    q: float = 0.0
    model: Literal["constant_power", "constant_impedance"] = "constant_power"


class DataCenterRecord(_Record):
    bus: int
    rating_mw: float = Field(gt=0)
    existing: bool = False


class CaseFile(_Record):
    name: str = ""
    system_mva: float = Field(default=100.0, gt=0)
    buses: List[BusRecord] = Field(min_length=1)
    branches: List[BranchRecord] = Field(default_factory=list)
    generators: List[GeneratorRecord] = Field(default_factory=list)
    loads: List[LoadRecord] = Field(default_factory=list)
    datacenters: List[DataCenterRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def cross_references(self) -> "CaseFile":
        seen: Dict[int, int] = {}
        for i, bus in enumerate(self.buses):
            if bus.id in seen:
                raise InputValidationError(
                    f"duplicate bus id {bus.id}", field_path=f"buses[{i}].id"
                )
            seen[bus.id] = i
        slacks = [bus.id for bus in self.buses if bus.type == "slack"]
        if len(slacks) != 1:
            raise InputValidationError(
                f"exactly one slack bus required, found {len(slacks)}",
                field_path="buses",
            )
        for i, branch in enumerate(self.branches):
            for key, bus_id in (("from", branch.from_bus), ("to", branch.to_bus)):
                if bus_id not in seen:
                    raise InputValidationError(
                        f"unknown bus {bus_id}", field_path=f"branches[{i}].{key}"
                    )
        for section in ("generators", "loads", "datacenters"):
            for i, record in enumerate(getattr(self, section)):
                if record.bus not in seen:
                    raise InputValidationError(
                        f"unknown bus {record.bus}", field_path=f"{section}[{i}].bus"
                    )
        ids = [g.id or f"G{i + 1}" for i, g in enumerate(self.generators)]
        for i, gen_id in enumerate(ids):
            if ids.index(gen_id) != i:
                raise InputValidationError(
                    f"duplicate generator id '{gen_id}'", field_path=f"generators[{i}].id"
                )
        return self


class MassRecord(_Record):
    label: str
    H: float = Field(gt=0)
    D_self: float = Field(default=0.0, ge=0)
    has_Tm: bool = False
    is_gen: bool = False
    Tm_share: Optional[float] = Field(default=None, ge=0)


class SectionRecord(_Record):
    K: Optional[float] = Field(default=None, gt=0)
    D_mutual: float = Field(default=0.0, ge=0)
    R: Optional[float] = Field(default=None, gt=0)
    l: Optional[float] = Field(default=None, gt=0)  # noqa: E741
    G: float = Field(default=83e9, gt=0)

    @model_validator(mode="after")
    def stiffness_source(self) -> "SectionRecord":
        if (self.R is None) != (self.l is None):
            raise ValueError("geometry needs both R and l")
        if self.K is None and self.R is None:
            raise ValueError("section needs K or geometry {R, l, G}")
        return self


class OperatingPointRecord(_Record):
    P0: float
    V: float = Field(default=1.0, gt=0)
    E: float = Field(default=1.0, gt=0)
    X: Optional[float] = Field(default=None, gt=0)


class ShaftFile(_Record):
    label: str = ""
    masses: List[MassRecord] = Field(min_length=1)
    sections: List[SectionRecord] = Field(default_factory=list)
    pole_count: int = Field(default=2, ge=2)
    mva: float = Field(gt=0)
    f_sync_hz: float = Field(default=60.0, gt=0)
    material: Optional[str] = None
    operating_point: Optional[OperatingPointRecord] = None

    @model_validator(mode="after")
    def chain_shape(self) -> "ShaftFile":
        if self.pole_count % 2:
            raise InputValidationError("pole count must be even", field_path="pole_count")
        if len(self.sections) != len(self.masses) - 1:
            raise InputValidationError(
                f"{len(self.masses)} masses need {len(self.masses) - 1} sections, "
                f"got {len(self.sections)}",
                field_path="sections",
            )
        generators = [i for i, m in enumerate(self.masses) if m.is_gen]
        if len(generators) != 1:
            raise InputValidationError(
                f"exactly one generator mass (is_gen) required, found {len(generators)}",
                field_path="masses",
            )
        return self


class MaterialFile(_Record):
    name: str = ""
    units: Literal["MPa", "Pa", "pu_torque"] = "MPa"
    Se: float = Field(gt=0)
    Sut: float = Field(gt=0)
    Sy: float = Field(gt=0)
    sn_points: List[Tuple[float, float]] = Field(min_length=2)

    @model_validator(mode="after")
    def strength_order(self) -> "MaterialFile":
        if not self.Se <= self.Sy <= self.Sut:
            raise InputValidationError("need Se <= Sy <= Sut", field_path="Sy")
        for i in range(1, len(self.sn_points)):
            (n_a, s_a), (n_b, s_b) = self.sn_points[i - 1], self.sn_points[i]
            if not (n_b > n_a and s_b < s_a):
                raise InputValidationError(
                    "S-N points must be strictly increasing in N and decreasing in S",
                    field_path=f"sn_points[{i}]",
                )
        if self.sn_points[0][0] < 1:
            raise InputValidationError("cycle counts must be >= 1", field_path="sn_points[0]")
        if self.sn_points[-1][1] < self.Se:
            raise InputValidationError(
                "last S-N amplitude is below the endurance limit",
                field_path=f"sn_points[{len(self.sn_points) - 1}]",
            )
        return self


class ToneRecord(_Record):
    freq_hz: float = Field(gt=0)
    amplitude_mw: float = Field(ge=0)
    phase_deg: float = 0.0


class ScenarioSiteRecord(_Record):
    bus: int
    levels: List[Tuple[float, float]] = Field(default_factory=list)
    tones: List[ToneRecord] = Field(default_factory=list)


class ScenarioFile(_Record):
    label: str = "scenario"
    duration_s: float = Field(gt=0)
    sample_rate_hz: float = Field(gt=0)
    ramp_limit_mw_per_s: float = Field(default=50.0, gt=0)
    sites: List[ScenarioSiteRecord] = Field(min_length=1)


class MeasuredSeriesFile(_Record):
    sample_rate_hz: float = Field(gt=0)
    values_mw: List[float] = Field(min_length=2)
    bus: Optional[int] = None


class LimitsSummaryFile(BaseModel):
    model_config = ConfigDict(extra="ignore")

    generators: Dict[str, Dict[str, Any]]


class IFMatrixFile(BaseModel):
    model_config = ConfigDict(extra="ignore")

    generators: List[str]
    dc_buses: List[int]
    values: List[List[Optional[float]]]
    perturbation_mw: float
    invalid_columns: List[int] = Field(default_factory=list)


def format_location(loc: Tuple[Any, ...]) -> str:
    """Render a pydantic error location as buses[2].id style path."""
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path


def to_input_error(error: ValidationError, source: str = "") -> InputValidationError:
    """Convert the first pydantic error into an InputValidationError."""
    first = error.errors()[0]
    prefix = f"{source}: " if source else ""
    return InputValidationError(f"{prefix}{first['msg']}", field_path=format_location(first["loc"]))
