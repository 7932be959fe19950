"""Tests for Data.Reader and Data.Schemas."""

import copy
import json
import math
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pytest

from TorsiLimit.Core.Models import BusType, GeneratorKind, StressUnits
from TorsiLimit.Data.Reader import (
    case_from_dict,
    load_json,
    load_materials,
    load_shafts,
    material_from_dict,
    parse_case,
    parse_measured_series,
    parse_scenario_file,
    read_limits_summary,
    serialize_case,
    serialize_material,
    serialize_shaft,
    shaft_from_dict,
)
from TorsiLimit.Data.Schemas import format_location
from TorsiLimit.ErrorHandling import ConfigurationError, InputValidationError


def _payload(fixtures_dir: Path, name: str) -> Dict[str, Any]:
    with open(fixtures_dir / name, encoding="utf-8") as f:
        return json.load(f)


class TestCaseParsing:
    """Network case files."""

    def test_two_bus_case(self, fixtures_dir: Path) -> None:
        """Records map onto NetworkCase fields."""
        case = parse_case(fixtures_dir / "two_bus_case.json")
        assert case.name == "two-bus"
        assert case.bus_ids == (1, 2)
        assert case.slack_bus.id == 1
        assert case.buses[1].type == BusType.PQ
        assert case.generators[0].subtransient_Xd2 == pytest.approx(0.2)
        assert case.generators[0].kind == GeneratorKind.SYNC
        assert case.datacenters[0].rating == pytest.approx(400.0)
        assert case.total_load_mw() == pytest.approx(50.0)

    def test_bus_type_case_insensitive(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["buses"][1]["type"] = "pq"
        assert case_from_dict(payload).buses[1].type == BusType.PQ

    def test_default_generator_ids(self, fixtures_dir: Path) -> None:
        """Unnamed generators are numbered in file order."""
        payload = _payload(fixtures_dir, "symmetric_case.json")
        for gen in payload["generators"]:
            del gen["id"]
        case = case_from_dict(payload)
        assert [g.id for g in case.generators] == ["G1", "G2"]

    def test_constant_impedance_load_becomes_shunt(self, fixtures_dir: Path) -> None:
        """y = P - jQ at nominal voltage joins the bus shunt."""
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["loads"] = [{"bus": 2, "p": 0.3, "q": 0.1, "model": "constant_impedance"}]
        case = case_from_dict(payload)
        assert case.loads == ()
        assert case.buses[1].shunt == pytest.approx(complex(0.3, -0.1))
        assert case.total_load_mw() == pytest.approx(30.0)

    def test_angles_in_degrees(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["buses"][0]["va_deg"] = 30.0
        assert case_from_dict(payload).buses[0].angle == pytest.approx(math.pi / 6)

    def test_duplicate_bus_reports_path(self, fixtures_dir: Path) -> None:
        """Cross-record errors name the offending field."""
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["buses"][1]["id"] = 1
        with pytest.raises(InputValidationError) as info:
            case_from_dict(payload)
        assert info.value.field_path == "buses[1].id"

    def test_unknown_bus_reference(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["loads"][0]["bus"] = 9
        with pytest.raises(InputValidationError) as info:
            case_from_dict(payload)
        assert info.value.field_path == "loads[0].bus"

    def test_exactly_one_slack(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["buses"][1]["type"] = "slack"
        with pytest.raises(InputValidationError, match="slack"):
            case_from_dict(payload)

    def test_zero_impedance_branch(self, fixtures_dir: Path) -> None:
        """Shape errors come back through the pydantic conversion."""
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["branches"][0]["x"] = 0.0
        with pytest.raises(InputValidationError) as info:
            case_from_dict(payload)
        assert info.value.field_path.startswith("branches[0]")

    def test_unknown_field_rejected(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["buses"][0]["voltage"] = 1.0
        with pytest.raises(InputValidationError):
            case_from_dict(payload)

    def test_disconnected_network(self, fixtures_dir: Path) -> None:
        """An islanded bus is rejected."""
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["buses"].append({"id": 3, "type": "PQ"})
        with pytest.raises(InputValidationError, match="disconnected"):
            case_from_dict(payload)

    def test_out_of_service_branch_islands(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "two_bus_case.json")
        payload["branches"][0]["in_service"] = False
        with pytest.raises(InputValidationError, match="disconnected"):
            case_from_dict(payload)

    def test_serialize_round_trip(self, fixtures_dir: Path) -> None:
        """Parsing the serialized form reproduces the case."""
        case = parse_case(fixtures_dir / "symmetric_case.json")
        assert case_from_dict(serialize_case(case)) == case


class TestShaftParsing:
    """Shaft assembly files."""

    def test_fbm_shaft(self, fixtures_dir: Path) -> None:
        shaft = shaft_from_dict(_payload(fixtures_dir, "fbm_shaft.json"))
        assert shaft.n_masses == 6
        assert shaft.mva_rating == pytest.approx(892.4)
        assert shaft.sync_speed == pytest.approx(2 * math.pi * 60)
        assert shaft.material == "fbm_pu"
        assert shaft.operating_point is not None
        assert shaft.operating_point.X == pytest.approx(0.83)
        assert not shaft.has_geometry

    def test_direct_stiffness_wins_over_geometry(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "tandem3_shaft.json")
        payload["sections"][0]["K"] = 42.0
        shaft = shaft_from_dict(payload)
        assert shaft.sections[0].stiffness_K == pytest.approx(42.0)
        assert shaft.sections[0].radius_R == pytest.approx(0.25)

    def test_section_needs_stiffness_source(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "fbm_shaft.json")
        payload["sections"][0] = {"D_mutual": 0.1}
        with pytest.raises(InputValidationError) as info:
            shaft_from_dict(payload)
        assert info.value.field_path.startswith("sections[0]")

    def test_section_count(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "fbm_shaft.json")
        payload["sections"].pop()
        with pytest.raises(InputValidationError) as info:
            shaft_from_dict(payload)
        assert info.value.field_path == "sections"

    def test_one_generator_mass(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "fbm_shaft.json")
        payload["masses"][5]["is_gen"] = True
        with pytest.raises(InputValidationError, match="generator"):
            shaft_from_dict(payload)

    def test_label_defaults_to_file_stem(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "fbm_shaft.json")
        del payload["label"]
        assert shaft_from_dict(payload, source="unit7.json").label == "unit7"

    def test_serialize_round_trip(self, fbm_shaft: Any) -> None:
        again = shaft_from_dict(serialize_shaft(fbm_shaft))
        assert again.masses == fbm_shaft.masses
        assert again.sections == fbm_shaft.sections
        assert again.operating_point == fbm_shaft.operating_point
        assert again.sync_speed == pytest.approx(fbm_shaft.sync_speed)

    def test_load_shafts_directory(self, tmp_path: Path, fixtures_dir: Path) -> None:
        """A directory yields every shaft keyed by label."""
        for name in ("fbm_shaft.json", "tandem3_shaft.json"):
            (tmp_path / name).write_text((fixtures_dir / name).read_text())
        shafts = load_shafts(tmp_path)
        assert sorted(shafts) == ["fbm", "tandem3"]

    def test_load_shafts_duplicate_label(self, tmp_path: Path, fixtures_dir: Path) -> None:
        text = (fixtures_dir / "fbm_shaft.json").read_text()
        (tmp_path / "a.json").write_text(text)
        (tmp_path / "b.json").write_text(text)
        with pytest.raises(InputValidationError, match="twice"):
            load_shafts(tmp_path)

    def test_empty_directory(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigurationError):
            load_shafts(tmp_path)


class TestMaterialParsing:
    """Material files."""

    def test_units_and_points(self, fixtures_dir: Path) -> None:
        materials = load_materials(fixtures_dir / "fbm_material.json")
        material = materials["fbm_pu"]
        assert material.units == StressUnits.PU_TORQUE
        assert material.sn_points[0] == (1000.0, 4.5)

    def test_strength_order_path(self, fixtures_dir: Path) -> None:
        payload = _payload(fixtures_dir, "aisi4130.json")
        payload["Sy"] = 700.0
        with pytest.raises(InputValidationError) as info:
            material_from_dict(payload)
        assert info.value.field_path == "Sy"

    def test_sn_monotonicity_path(self, fixtures_dir: Path) -> None:
        payload = copy.deepcopy(_payload(fixtures_dir, "aisi4130.json"))
        payload["sn_points"][1] = [1e5, 650.0]
        with pytest.raises(InputValidationError) as info:
            material_from_dict(payload)
        assert info.value.field_path == "sn_points[1]"

    def test_serialize_round_trip(self, aisi4130: Any) -> None:
        assert material_from_dict(serialize_material(aisi4130)) == aisi4130


class TestOtherFiles:
    """Scenario, measured-series and artifact readers."""

    def test_scenario_file(self, fixtures_dir: Path) -> None:
        record = parse_scenario_file(fixtures_dir / "scenario.json")
        assert record.label == "step-and-tone"
        assert record.sites[0].tones[0].freq_hz == pytest.approx(15.0)

    def test_measured_series(self, tmp_path: Path) -> None:
        path = tmp_path / "series.json"
        path.write_text(json.dumps({"sample_rate_hz": 200, "values_mw": [1, 2, 3], "bus": 4}))
        values, rate, bus = parse_measured_series(path)
        np.testing.assert_allclose(values, [1.0, 2.0, 3.0])
        assert rate == 200.0
        assert bus == 4

    def test_limits_summary(self, tmp_path: Path) -> None:
        path = tmp_path / "limits_summary.json"
        path.write_text(json.dumps({"generators": {"G1": {"P_e_max_mw": 10.5}}}))
        assert read_limits_summary(path) == {"G1": 10.5}

    def test_limits_summary_missing_value(self, tmp_path: Path) -> None:
        path = tmp_path / "limits_summary.json"
        path.write_text(json.dumps({"generators": {"G1": {}}}))
        with pytest.raises(InputValidationError):
            read_limits_summary(path)

    def test_missing_file(self, tmp_path: Path) -> None:
        """Absent inputs are configuration errors."""
        with pytest.raises(ConfigurationError, match="not found"):
            load_json(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InputValidationError, match="invalid JSON"):
            load_json(path)


def test_format_location() -> None:
    """Pydantic locations render as dotted paths with indices."""
    assert format_location(("buses", 2, "id")) == "buses[2].id"
    assert format_location(("sn_points",)) == "sn_points"
