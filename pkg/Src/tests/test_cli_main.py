"""Tests for the command-line entry point."""

import json
import math
from pathlib import Path
from typing import Iterator, List
from unittest.mock import MagicMock, patch

import numpy as np
import pytest
from conftest import sine

from TorsiLimit.Cli.Commands import build_studies
from TorsiLimit.Cli.Main import build_parser, main
from TorsiLimit.Core.Settings import StudyConfig
from TorsiLimit.Data.Export import IF_MATRIX_JSON, LIMITS_SUMMARY, PLAN_JSON
from TorsiLimit.Data.Reader import parse_case

COARSE_GRID_YAML = """\
grid_step_hz: 0.5
refine_step_hz: 0.05
refine_span_hz: 0.2
threads: 2
"""


@pytest.fixture(autouse=True)
def quiet_logging() -> Iterator[MagicMock]:
    """Keep the CLI from reconfiguring the root logger during tests."""
    with patch("TorsiLimit.Cli.Main.SetupLogging") as setup:
        yield setup


@pytest.fixture
def study_args(tmp_path: Path, fixtures_dir: Path) -> List[str]:
    """Common flags for the two-bus case with the benchmark shaft."""
    config = tmp_path / "study.yaml"
    config.write_text(COARSE_GRID_YAML, encoding="utf-8")
    return [
        "--config", str(config),
        "--case", str(fixtures_dir / "two_bus_case.json"),
        "--shafts", str(fixtures_dir / "fbm_shaft.json"),
        "--materials", str(fixtures_dir / "fbm_material.json"),
        "--out", str(tmp_path / "out"),
    ]


def _write_series(path: Path, amplitude_mw: float, bus: int = 2) -> Path:
    values = sine(amplitude_mw, 20.0, 1000.0, 10.0, offset=150.0)
    payload = {"sample_rate_hz": 1000.0, "bus": bus, "values_mw": values.tolist()}
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


class TestParser:
    """Argument parsing."""

    def test_subcommands_share_study_flags(self) -> None:
        args = build_parser().parse_args(
            ["plan", "--beta", "0.1", "--exclude-bus", "3", "--exclude-bus", "5", "--log-level", "debug"]
        )
        assert args.command == "plan"
        assert args.beta == 0.1
        assert args.exclude_bus == [3, 5]
        assert args.log_level == "DEBUG"

    def test_validate_takes_a_scenario(self) -> None:
        args = build_parser().parse_args(["validate", "s.json", "--scale", "2"])
        assert args.scenario == Path("s.json")
        assert args.scale == 2.0


class TestMain:
    """Exit codes of main()."""

    def test_version_flag(self) -> None:
        """Test --version prints the version and exits 0."""
        with patch("builtins.print") as mock_print:
            assert main(["--version"]) == 0
        mock_print.assert_called_once()
        assert mock_print.call_args[0][0].startswith("torsilimit ")

    def test_no_command_prints_help(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main([]) == 2
        assert "usage: torsilimit" in capsys.readouterr().err

    def test_missing_case_is_a_configuration_error(self, tmp_path: Path) -> None:
        assert main(["ifs", "--out", str(tmp_path)]) == 2

    def test_plan_needs_earlier_artifacts(self, tmp_path: Path, fixtures_dir: Path) -> None:
        argv = ["plan", "--case", str(fixtures_dir / "two_bus_case.json"), "--out", str(tmp_path)]
        assert main(argv) == 2

    def test_out_of_range_flag(self, tmp_path: Path) -> None:
        assert main(["limits", "--beta", "1.5", "--out", str(tmp_path)]) == 2

    def test_keyboard_interrupt(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        with patch("TorsiLimit.Cli.Main.cmd_limits", side_effect=KeyboardInterrupt):
            assert main(["limits", "--out", str(tmp_path)]) == 1
        assert "interrupted" in capsys.readouterr().err

    def test_unexpected_error(self, tmp_path: Path) -> None:
        with patch("TorsiLimit.Cli.Main.cmd_limits", side_effect=RuntimeError("boom")):
            assert main(["limits", "--out", str(tmp_path)]) == 1


class TestBuildStudies:
    """Operating points derived from the case."""

    def test_slack_machine_uses_solved_output(self, tmp_path: Path, fixtures_dir: Path) -> None:
        """The slack unit has no schedule; its P0 is the 50 MW it picks up in the flow."""
        shaft = json.loads((fixtures_dir / "fbm_shaft.json").read_text(encoding="utf-8"))
        del shaft["operating_point"]
        shaft_path = tmp_path / "fbm.json"
        shaft_path.write_text(json.dumps(shaft), encoding="utf-8")
        config = StudyConfig.load(
            overrides={"shafts": shaft_path, "materials": fixtures_dir / "fbm_material.json"}
        )
        case = parse_case(fixtures_dir / "two_bus_case.json")
        assert case.generators[0].P == 0.0

        study = build_studies(config, case)["G1"]
        P0 = 50.0 / 892.4
        model = study.model
        assert model.delta0 > 0
        assert model.delta0 == pytest.approx(math.asin(P0 * model.X / (model.E * model.V)), rel=1e-6)
        assert np.any(np.abs(study.mean_stress) > 0)


@pytest.mark.slow
class TestPipeline:
    """limits, ifs, plan and check on the two-bus case."""

    def test_step_by_step(self, tmp_path: Path, study_args: List[str]) -> None:
        out = tmp_path / "out"
        assert main(["limits", *study_args]) == 0
        assert main(["ifs", *study_args]) == 0
        assert main(["plan", *study_args]) == 0

        summary = json.loads((out / LIMITS_SUMMARY).read_text(encoding="utf-8"))
        P_e_max = summary["generators"]["G1"]["P_e_max_mw"]
        assert (out / "limits" / "G1.csv").is_file()
        IF = json.loads((out / IF_MATRIX_JSON).read_text(encoding="utf-8"))
        assert IF["values"] == [[pytest.approx(1.0, abs=1e-6)]]
        plan = json.loads((out / PLAN_JSON).read_text(encoding="utf-8"))
        allocation = plan["lp"]["allocations_mw"]["2"]
        assert 0.0 < allocation <= min(P_e_max, 100.0) + 1e-6

        quiet = _write_series(tmp_path / "quiet.json", 0.5 * allocation)
        assert main(["check", str(quiet), *study_args]) == 0
        loud = _write_series(tmp_path / "loud.json", 2.0 * allocation)
        assert main(["check", str(loud), *study_args]) == 1
        assert main(["check", str(loud), "--limit-mw", str(3.0 * allocation), *study_args]) == 0

    def test_check_unknown_bus(self, tmp_path: Path, study_args: List[str]) -> None:
        assert main(["run-all", *study_args]) == 0
        series = _write_series(tmp_path / "other.json", 1.0, bus=7)
        assert main(["check", str(series), *study_args]) == 2

    def test_run_all_is_deterministic(self, tmp_path: Path, study_args: List[str]) -> None:
        out = tmp_path / "out"
        assert main(["run-all", *study_args]) == 0
        first = (out / PLAN_JSON).read_bytes()
        assert main(["run-all", *study_args]) == 0
        assert (out / PLAN_JSON).read_bytes() == first
        assert np.isfinite(json.loads(first)["lp"]["alpha_final"])
