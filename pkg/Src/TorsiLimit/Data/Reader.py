# File: Reader.py
# Path: /root/pkg/Src/TorsiLimit/Data/Reader.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 11:48AM

"""Readers and serializers for study input files.

Case, shaft, material, scenario and measured-series files are JSON. Parsing
validates against Data.Schemas, converts in-file units (degrees, geometry,
constant-impedance loads) and returns immutable Core.Models objects. The
serialize_* functions emit the file form back so parse(serialize(x)) == x.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np
from pydantic import ValidationError
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from TorsiLimit.Core.Models import (
    Branch,
    Bus,
    BusType,
    DataCenterSite,
    Generator,
    GeneratorKind,
    Load,
    LoadModel,
    MaterialSpec,
    NetworkCase,
    OperatingPoint,
    RotorMass,
    ShaftAssembly,
    ShaftSection,
    StressUnits,
)
from TorsiLimit.Core.Units import section_stiffness
from TorsiLimit.Data.Schemas import (
    CaseFile,
    IFMatrixFile,
    LimitsSummaryFile,
    MaterialFile,
    MeasuredSeriesFile,
    ScenarioFile,
    ShaftFile,
    to_input_error,
)
from TorsiLimit.ErrorHandling import (
    ConfigurationError,
    DomainError,
    InputValidationError,
    report_file_error,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_json(path: PathLike) -> Any:
    """Read a JSON document, mapping I/O and syntax failures to input errors."""
    file_path = Path(path)
    if not file_path.is_file():
        error = ConfigurationError(f"input file not found: {file_path}")
        report_file_error(error, file_path, "read")
        raise error
    try:
        with open(file_path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        report_file_error(e, file_path, "parse", {"line": e.lineno})
        raise InputValidationError(
            f"{file_path.name}: invalid JSON ({e.msg} at line {e.lineno})"
        ) from e
    except OSError as e:
        report_file_error(e, file_path, "read")
        raise ConfigurationError(f"cannot read {file_path}: {e}") from e


def _validate(schema: Any, payload: Any, source: str) -> Any:
    try:
        return schema.model_validate(payload)
    except ValidationError as e:
        raise to_input_error(e, source) from e


def check_connectivity(case: NetworkCase) -> None:
    """Raise when in-service branches leave the bus graph disconnected."""
    n = len(case.buses)
    if n <= 1:
        return
    rows, cols = [], []
    for branch in case.branches:
        if branch.in_service:
            rows.append(case.bus_index(branch.from_bus))
            cols.append(case.bus_index(branch.to_bus))
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    n_components, labels = connected_components(graph, directed=False)
    if n_components > 1:
        island = [case.buses[i].id for i in range(n) if labels[i] != labels[0]]
        raise InputValidationError(
            f"network is disconnected; buses {sorted(island)[:10]} are islanded",
            field_path="branches",
        )


def case_from_dict(payload: Dict[str, Any], source: str = "case") -> NetworkCase:
    """Build a validated NetworkCase from the case-file dictionary."""
    record = _validate(CaseFile, payload, source)

    shunts: Dict[int, complex] = {bus.id: complex(bus.gs, bus.bs) for bus in record.buses}
    loads: List[Load] = []
    for load in record.loads:
        if load.model == LoadModel.CONSTANT_IMPEDANCE.value:
            # y = (P - jQ)/|V|^2 at nominal voltage
            shunts[load.bus] += complex(load.p, -load.q)
        else:
            loads.append(Load(bus=load.bus, P=load.p, Q=load.q))

    buses = tuple(
        Bus(
            id=bus.id,
            type=BusType(bus.type),
            voltage_mag=bus.vm,
            angle=math.radians(bus.va_deg),
            shunt=shunts[bus.id],
        )
        for bus in record.buses
    )
    branches = tuple(
        Branch(
            from_bus=br.from_bus,
            to_bus=br.to_bus,
            R=br.r,
            X=br.x,
            B=br.b,
            tap=br.tap,
            in_service=br.in_service,
        )
        for br in record.branches
    )
    generators = tuple(
        Generator(
            id=gen.id or f"G{i + 1}",
            bus=gen.bus,
            P=gen.p,
            V_setpoint=gen.vset,
            armature_Ra=gen.ra,
            subtransient_Xd2=gen.xd2,
            kind=GeneratorKind(gen.kind),
            shaft=gen.shaft,
        )
        for i, gen in enumerate(record.generators)
    )
    try:
        sites = tuple(
            DataCenterSite(bus=dc.bus, rating=dc.rating_mw, existing=dc.existing)
            for dc in record.datacenters
        )
    except DomainError as e:
        raise InputValidationError(str(e), field_path="datacenters") from e

    case = NetworkCase(
        buses=buses,
        branches=branches,
        generators=generators,
        loads=tuple(loads),
        system_mva=record.system_mva,
        datacenters=sites,
        name=record.name,
    )
    check_connectivity(case)
    logger.debug(
        f"Parsed case '{case.name}': {len(buses)} buses, {len(branches)} branches, "
        f"{len(generators)} generators"
    )
    return case


def parse_case(path: PathLike) -> NetworkCase:
    """Parse and validate a network case file."""
    return case_from_dict(load_json(path), source=Path(path).name)


def serialize_case(case: NetworkCase) -> Dict[str, Any]:
    """File-form dictionary of a case; impedance loads appear as bus shunts."""
    return {
        "name": case.name,
        "system_mva": case.system_mva,
        "buses": [
            {
                "id": bus.id,
                "type": bus.type.value,
                "vm": bus.voltage_mag,
                "va_deg": math.degrees(bus.angle),
                "gs": bus.shunt.real,
                "bs": bus.shunt.imag,
            }
            for bus in case.buses
        ],
        "branches": [
            {
                "from": br.from_bus,
                "to": br.to_bus,
                "r": br.R,
                "x": br.X,
                "b": br.B,
                "tap": br.tap,
                "in_service": br.in_service,
            }
            for br in case.branches
        ],
        "generators": [
            {
                "id": gen.id,
                "bus": gen.bus,
                "p": gen.P,
                "vset": gen.V_setpoint,
                "ra": gen.armature_Ra,
                "xd2": gen.subtransient_Xd2,
                "kind": gen.kind.value,
                "shaft": gen.shaft,
            }
            for gen in case.generators
        ],
        "loads": [
            {"bus": load.bus, "p": load.P, "q": load.Q, "model": load.model.value}
            for load in case.loads
        ],
        "datacenters": [
            {"bus": dc.bus, "rating_mw": dc.rating, "existing": dc.existing}
            for dc in case.datacenters
        ],
    }


def shaft_from_dict(payload: Dict[str, Any], source: str = "shaft") -> ShaftAssembly:
    """Build a ShaftAssembly; direct stiffness wins over geometry."""
    record = _validate(ShaftFile, payload, source)
    sync_speed = 2.0 * math.pi * record.f_sync_hz

    masses = tuple(
        RotorMass(
            label=m.label,
            inertia_H=m.H,
            self_damping=m.D_self,
            applies_mech_torque=m.has_Tm,
            is_generator=m.is_gen,
            mech_torque_share=m.Tm_share,
        )
        for m in record.masses
    )
    sections = []
    for s in record.sections:
        if s.K is not None:
            stiffness = s.K
        else:
            stiffness = section_stiffness(
                s.R, s.l, s.G, record.mva, sync_speed, record.pole_count
            )
        sections.append(
            ShaftSection(
                stiffness_K=stiffness,
                mutual_damping=s.D_mutual,
                radius_R=s.R,
                length_l=s.l,
                shear_modulus_G=s.G,
            )
        )
    op = record.operating_point
    try:
        return ShaftAssembly(
            masses=masses,
            sections=tuple(sections),
            pole_count=record.pole_count,
            mva_rating=record.mva,
            sync_speed=sync_speed,
            label=record.label or Path(source).stem,
            material=record.material,
            operating_point=(
                OperatingPoint(P0=op.P0, V=op.V, E=op.E, X=op.X) if op else None
            ),
        )
    except DomainError as e:
        raise InputValidationError(f"{source}: {e}") from e


def parse_shaft(path: PathLike) -> ShaftAssembly:
    """Parse and validate a shaft assembly file."""
    return shaft_from_dict(load_json(path), source=Path(path).name)


def serialize_shaft(shaft: ShaftAssembly) -> Dict[str, Any]:
    """File-form dictionary of a shaft; stiffness is always written explicitly."""
    payload: Dict[str, Any] = {
        "label": shaft.label,
        "pole_count": shaft.pole_count,
        "mva": shaft.mva_rating,
        "f_sync_hz": shaft.f_sync_hz,
        "material": shaft.material,
        "masses": [
            {
                "label": m.label,
                "H": m.inertia_H,
                "D_self": m.self_damping,
                "has_Tm": m.applies_mech_torque,
                "is_gen": m.is_generator,
                "Tm_share": m.mech_torque_share,
            }
            for m in shaft.masses
        ],
        "sections": [
            {
                "K": s.stiffness_K,
                "D_mutual": s.mutual_damping,
                "R": s.radius_R,
                "l": s.length_l,
                "G": s.shear_modulus_G,
            }
            for s in shaft.sections
        ],
    }
    if shaft.operating_point is not None:
        op = shaft.operating_point
        payload["operating_point"] = {"P0": op.P0, "V": op.V, "E": op.E, "X": op.X}
    return payload


def material_from_dict(payload: Dict[str, Any], source: str = "material") -> MaterialSpec:
    record = _validate(MaterialFile, payload, source)
    return MaterialSpec(
        endurance_limit_Se=record.Se,
        ultimate_Sut=record.Sut,
        yield_Sy=record.Sy,
        sn_points=tuple((float(n), float(s)) for n, s in record.sn_points),
        units=StressUnits(record.units),
        name=record.name or Path(source).stem,
    )


def parse_material(path: PathLike) -> MaterialSpec:
    """Parse and validate a material file."""
    return material_from_dict(load_json(path), source=Path(path).name)


def serialize_material(material: MaterialSpec) -> Dict[str, Any]:
    return {
        "name": material.name,
        "units": material.units.value,
        "Se": material.endurance_limit_Se,
        "Sut": material.ultimate_Sut,
        "Sy": material.yield_Sy,
        "sn_points": [[n, s] for n, s in material.sn_points],
    }


def _json_files(path: PathLike) -> List[Path]:
    root = Path(path)
    if root.is_dir():
        files = sorted(root.glob("*.json"))
        if not files:
            raise ConfigurationError(f"no JSON files in {root}")
        return files
    if not root.is_file():
        raise ConfigurationError(f"input path not found: {root}")
    return [root]


def load_shafts(path: PathLike) -> Dict[str, ShaftAssembly]:
    """Load one shaft file or every *.json shaft in a directory, keyed by label."""
    shafts: Dict[str, ShaftAssembly] = {}
    for file_path in _json_files(path):
        shaft = parse_shaft(file_path)
        if shaft.label in shafts:
            raise InputValidationError(
                f"shaft label '{shaft.label}' defined twice", field_path=str(file_path)
            )
        shafts[shaft.label] = shaft
    return shafts


def load_materials(path: PathLike) -> Dict[str, MaterialSpec]:
    """Load one material file or a directory of them, keyed by name."""
    materials: Dict[str, MaterialSpec] = {}
    for file_path in _json_files(path):
        material = parse_material(file_path)
        materials[material.name] = material
    return materials


def parse_scenario_file(path: PathLike) -> ScenarioFile:
    return _validate(ScenarioFile, load_json(path), Path(path).name)


def parse_measured_series(path: PathLike) -> Tuple[np.ndarray, float, Any]:
    """Return (values MW, sample rate Hz, optional bus) of a measured series."""
    record = _validate(MeasuredSeriesFile, load_json(path), Path(path).name)
    return np.asarray(record.values_mw, dtype=float), record.sample_rate_hz, record.bus


def read_limits_summary(path: PathLike) -> Dict[str, float]:
    """P_e^max per generator (MW) from a limits_summary.json artifact."""
    record = _validate(LimitsSummaryFile, load_json(path), Path(path).name)
    try:
        return {gen: float(data["P_e_max_mw"]) for gen, data in record.generators.items()}
    except (KeyError, TypeError, ValueError) as e:
        raise InputValidationError(
            f"{Path(path).name}: generator entry lacks P_e_max_mw"
        ) from e


def read_if_matrix_payload(path: PathLike) -> IFMatrixFile:
    return _validate(IFMatrixFile, load_json(path), Path(path).name)
