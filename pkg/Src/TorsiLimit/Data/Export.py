# File: Export.py
# Path: /root/pkg/Src/TorsiLimit/Data/Export.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 18:10PM

"""Study artifacts: deterministic JSON reports and CSV tables.

JSON is written with sorted keys, two-space indent and floats rounded to nine
significant digits (non-finite values become null), so identical inputs give
byte-identical files. Files are written to a temporary sibling and renamed.
"""

import csv
import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np

from TorsiLimit.Data.Reader import load_json, read_if_matrix_payload
from TorsiLimit.Limits.TerminalLimits import LimitProfile
from TorsiLimit.Network.InteractionFactors import IFMatrix
from TorsiLimit.Planning.Compliance import ComplianceResult
from TorsiLimit.Planning.Planner import LPResult, SiteBound
from TorsiLimit.Utils.Formatting import format_sig, round_significant
from TorsiLimit.Validation.Validator import ExposureRecord, GeneratorVerdict

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

LIMITS_SUMMARY = "limits_summary.json"
IF_MATRIX_JSON = "if_matrix.json"
IF_MATRIX_CSV = "if_matrix.csv"
PLAN_JSON = "plan.json"
VERDICTS_JSON = "verdicts.json"
COMPLIANCE_JSON = "compliance.json"
SPECTRUM_CSV = "spectrum.csv"


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy, enum and path values into rounded JSON types."""
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round_significant(float(value))
    return value


def _replace(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_suffix(path.suffix + ".tmp")
    with open(temp_file, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    temp_file.replace(path)


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    text = json.dumps(to_jsonable(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"
    _replace(path, text)
    logger.debug(f"Wrote {path}")
    return path


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """CSV with a header row; floats at nine significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_suffix(path.suffix + ".tmp")
    with open(temp_file, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [format_sig(v) if isinstance(v, (float, np.floating)) else v for v in row]
            )
    temp_file.replace(path)
    logger.debug(f"Wrote {path}")
    return path


# --- limits -------------------------------------------------------------------


def export_limit_profile(out_dir: PathLike, profile: LimitProfile) -> List[Path]:
    """limits/<gen>.csv (limit curves) and limits/<gen>_sweep.csv (raw gains)."""
    limits_dir = Path(out_dir) / "limits"
    curve = write_csv(
        limits_dir / f"{profile.generator}.csv",
        ["f_hz", "omega_rad_s", "P_tor_max_mw", "P_vib_max_mw", "P_max_mw"],
        zip(
            profile.f_hz,
            profile.omegas,
            profile.P_tor_max,
            profile.P_vib_max,
            profile.P_max_curve,
        ),
    )
    n_sections = len(profile.allowables)
    header = ["f_hz", "freq_gain"]
    header += [f"stress_gain_{r}" for r in range(n_sections)]
    header += [f"section_limit_mw_{r}" for r in range(n_sections)]
    rows = []
    for k, sample in enumerate(profile.samples):
        rows.append(
            [sample.f_hz, sample.freq_gain, *sample.stress_gain, *profile.section_limits[k]]
        )
    sweep = write_csv(limits_dir / f"{profile.generator}_sweep.csv", header, rows)
    return [curve, sweep]


def limits_summary(profiles: Sequence[LimitProfile], section_labels: Mapping[str, Sequence[str]]) -> Dict[str, Any]:
    return {
        "generators": {
            p.generator: {
                "P_e_max_mw": p.P_e_max,
                "P_e_max_fraction": p.P_e_max_fraction,
                "critical_f_hz": p.critical_omega / (2.0 * math.pi),
                "mva_rating": p.mva_rating,
                "cap_fraction": p.cap_fraction,
                "delta_f_max_hz": p.delta_f_max,
                "modes_hz": [w / (2.0 * math.pi) for w in p.modes_rad_s],
                "sections": list(section_labels.get(p.generator, ())),
                "allowable_amplitude": p.allowables,
                "mean_stress": p.mean_stress,
            }
            for p in profiles
        }
    }


# --- interaction factors ------------------------------------------------------


def export_if_matrix(out_dir: PathLike, IF: IFMatrix) -> List[Path]:
    out_dir = Path(out_dir)
    rows = [[gen, *IF.values[i]] for i, gen in enumerate(IF.generators)]
    table = write_csv(out_dir / IF_MATRIX_CSV, ["generator", *[str(b) for b in IF.dc_buses]], rows)
    payload = {
        "generators": IF.generators,
        "dc_buses": IF.dc_buses,
        "values": IF.values,
        "perturbation_mw": IF.perturbation_mw,
        "invalid_columns": IF.invalid_columns,
        "column_sums": IF.column_sums(),
    }
    return [table, write_json(out_dir / IF_MATRIX_JSON, payload)]


def read_if_matrix(path: PathLike) -> IFMatrix:
    """Rebuild an IFMatrix from if_matrix.json; null entries become NaN."""
    record = read_if_matrix_payload(path)
    values = np.array(
        [[math.nan if v is None else v for v in row] for row in record.values], dtype=float
    )
    return IFMatrix(
        values=values.reshape(len(record.generators), len(record.dc_buses)),
        generators=tuple(record.generators),
        dc_buses=tuple(record.dc_buses),
        perturbation_mw=record.perturbation_mw,
        invalid_columns=tuple(record.invalid_columns),
    )


# --- planning -----------------------------------------------------------------


def plan_report(
    bounds: Sequence[SiteBound],
    result: LPResult,
    utilisation: Mapping[str, float],
    beta: float,
    threshold_mw: float,
) -> Dict[str, Any]:
    return {
        "beta": beta,
        "threshold_mw": threshold_mw,
        "site_bounds": [
            {
                "rank": rank,
                "bus": b.bus,
                "P_dc_max_mw": b.P_dc_max,
                "binding": b.binding,
                "grid_bound_mw": b.grid_bound,
                "compute_cap_mw": b.compute_cap,
                "existing": b.existing,
            }
            for rank, b in enumerate(bounds, start=1)
        ],
        "lp": {
            "feasible": result.feasible,
            "alpha_final": result.alpha_final,
            "iterations": result.iterations,
            "objective_mw": result.objective,
            "alternative_optima": result.alternative_optima,
            "excluded": result.excluded,
            "allocations_mw": {str(bus): p for bus, p in result.allocations.items()},
        },
        "generator_utilisation": dict(utilisation),
    }


def read_plan_allocations(path: PathLike) -> Dict[int, float]:
    payload = load_json(path)
    return {int(bus): float(p) for bus, p in payload["lp"]["allocations_mw"].items()}


# --- validation ---------------------------------------------------------------


def verdict_report(
    scenario: str,
    verdicts: Sequence[GeneratorVerdict],
    exposure: Optional[Mapping[str, ExposureRecord]] = None,
) -> Dict[str, Any]:
    exposure = exposure or {}
    return {
        "scenario": scenario,
        "passed": all(v.passed for v in verdicts),
        "generators": [
            {
                "generator": v.generator,
                "passed": v.passed,
                "max_freq_dev_hz": v.max_freq_dev_hz,
                "delta_f_max_hz": v.delta_f_max,
                "damage": v.damage,
                "sections": [
                    {
                        "label": s.label,
                        "sigma_a": s.sigma_a,
                        "sigma_m": s.sigma_m,
                        "allowable": s.allowable,
                        "transient_peak": s.transient_peak,
                        "normalized_peak": s.normalized_peak,
                        "damage": s.damage,
                        "passed": s.passed,
                    }
                    for s in v.sections
                ],
            }
            for v in verdicts
        ],
        "terminal_exposure": {
            gen: {"exposure_mw": e.exposure_mw, "limit_mw": e.limit_mw, "exceeds": e.exceeds}
            for gen, e in exposure.items()
        },
    }


def export_trajectory(out_dir: PathLike, verdict: GeneratorVerdict) -> Optional[Path]:
    trajectory = verdict.trajectory
    if trajectory is None:
        return None
    labels = [s.label for s in verdict.sections]
    header = ["time_s", "freq_dev_hz", *[f"stress_{label}" for label in labels]]
    rows = (
        [t, f, *stress]
        for t, f, stress in zip(trajectory.time, trajectory.freq_dev_hz, trajectory.stress)
    )
    return write_csv(Path(out_dir) / "trajectories" / f"{verdict.generator}.csv", header, rows)


def export_cycles(out_dir: PathLike, verdict: GeneratorVerdict) -> Path:
    rows = [
        [s.label, c.range, c.mean, c.count] for s in verdict.sections for c in s.cycles
    ]
    return write_csv(
        Path(out_dir) / "cycles" / f"{verdict.generator}.csv",
        ["section", "range", "mean", "count"],
        rows,
    )


# --- compliance ---------------------------------------------------------------


def export_compliance(out_dir: PathLike, result: ComplianceResult) -> List[Path]:
    out_dir = Path(out_dir)
    spectrum = write_csv(
        out_dir / SPECTRUM_CSV, ["f_hz", "amplitude_mw"], zip(result.f_hz, result.amplitude_mw)
    )
    report = write_json(
        out_dir / COMPLIANCE_JSON,
        {
            "bus": result.bus,
            "passed": result.passed,
            "amplitude_sum_mw": result.amplitude_sum,
            "limit_mw": result.limit,
            "margin_mw": result.margin,
        },
    )
    return [spectrum, report]
