# File: Commands.py
# Path: /root/pkg/Src/TorsiLimit/Cli/Commands.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 19:40PM

"""Subcommand implementations.

Each command reads its inputs from the configured paths or from artifacts of
an earlier step in the output directory, writes its own artifacts and returns
an exit code: 0 when everything passed, 1 on a FAIL verdict or a flagged
numerical result. Input and configuration problems are raised and mapped to
exit code 2 by the caller.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from TorsiLimit.Cli.Bootstrap import EnsureOutputDirectories
from TorsiLimit.Core.Models import Generator, MaterialSpec, NetworkCase, ShaftAssembly
from TorsiLimit.Core.Settings import StudyConfig
from TorsiLimit.Data.Export import (
    IF_MATRIX_JSON,
    LIMITS_SUMMARY,
    PLAN_JSON,
    VERDICTS_JSON,
    export_compliance,
    export_cycles,
    export_if_matrix,
    export_limit_profile,
    export_trajectory,
    limits_summary,
    plan_report,
    read_if_matrix,
    read_plan_allocations,
    verdict_report,
    write_json,
)
from TorsiLimit.Data.Reader import (
    load_materials,
    load_shafts,
    parse_case,
    parse_measured_series,
    parse_scenario_file,
    read_limits_summary,
)
from TorsiLimit.ErrorHandling import ConfigurationError
from TorsiLimit.Limits.TerminalLimits import (
    GeneratorStudy,
    GridSettings,
    compute_limit_profile,
    prepare_generator_study,
)
from TorsiLimit.Network.InteractionFactors import compute_if_matrix, thevenin_reactance
from TorsiLimit.Network.PowerFlow import PowerFlowSolution, generator_outputs, solve_power_flow
from TorsiLimit.Planning.Compliance import aligned_windows, compliance_check, window_amplitude_sums
from TorsiLimit.Planning.Planner import (
    binding_generators,
    exclusion_rerun,
    optimize_allocations,
    site_bounds,
)
from TorsiLimit.Ui.TableViews import TableViewsController
from TorsiLimit.Validation.Scenarios import scenario_from_file
from TorsiLimit.Validation.Validator import terminal_exposure, validate_scenario

logger = logging.getLogger(__name__)


def grid_settings(config: StudyConfig) -> GridSettings:
    return GridSettings(
        step_hz=config.grid_step_hz,
        refine_step_hz=config.refine_step_hz,
        refine_span_hz=config.refine_span_hz,
    )


def load_case(config: StudyConfig) -> NetworkCase:
    config.require("case")
    assert config.case is not None
    return parse_case(config.case)


def _material_for(shaft: ShaftAssembly, materials: Dict[str, MaterialSpec]) -> MaterialSpec:
    if shaft.material is not None:
        if shaft.material not in materials:
            raise ConfigurationError(
                f"shaft '{shaft.label}' names material '{shaft.material}', "
                f"available: {sorted(materials)}"
            )
        return materials[shaft.material]
    if len(materials) == 1:
        return next(iter(materials.values()))
    raise ConfigurationError(
        f"shaft '{shaft.label}' names no material and {len(materials)} are loaded"
    )


def _generator_for(case: Optional[NetworkCase], shaft: ShaftAssembly) -> Optional[Generator]:
    if case is None:
        return None
    for gen in case.synchronous_generators:
        if gen.shaft == shaft.label:
            return gen
    for gen in case.synchronous_generators:
        if gen.id == shaft.label:
            return gen
    return None


def build_studies(
    config: StudyConfig, case: Optional[NetworkCase] = None
) -> Dict[str, GeneratorStudy]:
    """One GeneratorStudy per shaft file, keyed by generator id.

    The operating point comes from the shaft file. Missing values are taken
    from the case: P0 from the machine's output in the base-case power flow
    (the slack machine carries its solved output, not a schedule) and X from
    the Thevenin reactance seen by the machine.
    """
    config.require("shafts", "materials")
    assert config.shafts is not None and config.materials is not None
    shafts = load_shafts(config.shafts)
    materials = load_materials(config.materials)
    base: Optional[PowerFlowSolution] = None
    outputs: Dict[str, complex] = {}
    studies: Dict[str, GeneratorStudy] = {}
    for label in sorted(shafts):
        shaft = shafts[label]
        gen = _generator_for(case, shaft)
        if case is not None and gen is None:
            logger.warning(f"Shaft '{label}' matches no synchronous generator in the case")
        generator_id = gen.id if gen is not None else label
        op = shaft.operating_point

        if op is not None:
            P0, V, E = op.P0, op.V, op.E
        elif gen is not None and case is not None:
            if base is None:
                base = solve_power_flow(case)
                outputs = generator_outputs(base, case.generators)
            P0 = outputs[gen.id].real * case.system_mva / shaft.mva_rating
            V, E = 1.0, 1.0
        else:
            raise ConfigurationError(
                f"shaft '{label}': no operating_point and no case generator to derive one"
            )

        if op is not None and op.X is not None:
            X = op.X
        elif gen is not None and case is not None:
            X = thevenin_reactance(case, gen.id, shaft.mva_rating)
        else:
            raise ConfigurationError(
                f"shaft '{label}': give operating_point.X or a case with this generator"
            )

        studies[generator_id] = prepare_generator_study(
            generator_id, shaft, _material_for(shaft, materials), P0, V, X, E
        )
    return studies


def _artifact(config: StudyConfig, name: str, producer: str) -> Path:
    path = Path(config.out) / name
    if not path.is_file():
        raise ConfigurationError(f"{path} not found; run `torsilimit {producer}` first")
    return path


def _bus_weights(config: StudyConfig, buses: Sequence[int]) -> Optional[List[float]]:
    if not config.weights:
        return None
    return [float(config.weights.get(bus, 1.0)) for bus in buses]


def cmd_limits(config: StudyConfig, tables: TableViewsController) -> int:
    """Terminal fluctuation limits of every shaft: CSV curves and limits_summary.json."""
    out = EnsureOutputDirectories(config.out)
    case = parse_case(config.case) if config.case is not None else None
    studies = build_studies(config, case)
    grid = grid_settings(config)
    workers = config.worker_count()
    profiles = [
        compute_limit_profile(
            study, config.cap_fraction, config.delta_f_max_hz, grid, max_workers=workers
        )
        for study in studies.values()
    ]
    for profile in profiles:
        export_limit_profile(out, profile)
    labels = {gen: study.shaft.section_labels() for gen, study in studies.items()}
    write_json(out / LIMITS_SUMMARY, limits_summary(profiles, labels))
    tables.display(tables.create_limits_table(profiles))
    return 0


def cmd_ifs(config: StudyConfig, tables: TableViewsController) -> int:
    """Interaction-factor matrix for the case's data-center buses."""
    out = EnsureOutputDirectories(config.out)
    case = load_case(config)
    dc_buses = [site.bus for site in case.datacenters]
    if not dc_buses:
        raise ConfigurationError(f"case '{case.name}' lists no data-center sites")
    IF = compute_if_matrix(
        case,
        dc_buses,
        config.perturbation_mw,
        max_workers=config.worker_count(),
        tolerance=config.tolerance_pf,
        max_iter=config.max_iter_pf,
    )
    export_if_matrix(out, IF)
    tables.display(tables.create_if_table(IF))
    if IF.invalid_columns:
        logger.error(f"IF columns flagged for buses {list(IF.invalid_columns)}")
        return 1
    return 0


def cmd_plan(config: StudyConfig, tables: TableViewsController) -> int:
    """Site screening and the iterative allocation LP from the limits and IF artifacts."""
    out = EnsureOutputDirectories(config.out)
    case = load_case(config)
    P_e_max = read_limits_summary(_artifact(config, LIMITS_SUMMARY, "limits"))
    IF = read_if_matrix(_artifact(config, IF_MATRIX_JSON, "ifs"))
    bounds = site_bounds(
        P_e_max, IF, case.datacenters, config.compute_fraction, config.threshold_mw
    )
    weights = _bus_weights(config, [b.bus for b in bounds])
    if config.exclude_buses:
        result = exclusion_rerun(P_e_max, IF, bounds, config.exclude_buses, config.beta, weights)
    else:
        result = optimize_allocations(P_e_max, IF, bounds, config.beta, weights)
    utilisation = binding_generators(result, IF, P_e_max)
    write_json(
        out / PLAN_JSON,
        plan_report(bounds, result, utilisation, config.beta, config.threshold_mw),
    )
    tables.display(tables.create_plan_table(bounds, result))
    if not result.feasible:
        logger.error("Allocation LP infeasible even at alpha = 0")
        return 1
    return 0


def cmd_validate(
    config: StudyConfig,
    scenario_path: Path,
    tables: TableViewsController,
    scale: Optional[float] = None,
) -> int:
    """Time-domain verdicts of a scenario on every shaft, plus terminal exposure."""
    out = EnsureOutputDirectories(config.out)
    case = parse_case(config.case) if config.case is not None else None
    IF = read_if_matrix(_artifact(config, IF_MATRIX_JSON, "ifs"))
    studies = build_studies(config, case)
    scenario = scenario_from_file(parse_scenario_file(scenario_path), config.f_sync_hz)
    if scale is not None:
        scenario = scenario.scaled(scale)
    verdicts = validate_scenario(
        scenario,
        IF,
        studies,
        delta_f_max=config.delta_f_max_hz,
        dt=config.simulation_dt_s,
        settle_s=config.settle_s,
        window_s=config.amplitude_window_s,
        max_workers=config.worker_count(),
    )
    summary = Path(config.out) / LIMITS_SUMMARY
    exposure = None
    if summary.is_file():
        exposure = terminal_exposure(
            scenario,
            IF,
            read_limits_summary(summary),
            config.f_sync_hz,
            config.amplitude_window_s,
        )
    for verdict in verdicts:
        export_trajectory(out, verdict)
        export_cycles(out, verdict)
    write_json(out / VERDICTS_JSON, verdict_report(scenario.label, verdicts, exposure))
    tables.display(tables.create_verdict_table(verdicts))
    return 0 if all(v.passed for v in verdicts) else 1


def _worst_window(values: np.ndarray, sample_rate_hz: float, config: StudyConfig) -> np.ndarray:
    size = int(round(config.amplitude_window_s * sample_rate_hz))
    if values.size <= size:
        return values
    sums = window_amplitude_sums(values, sample_rate_hz, config.f_sync_hz, config.amplitude_window_s)
    worst = int(np.argmax(sums))
    logger.info(
        f"Series spans {values.size // size} windows; checking window {worst} "
        f"(amplitude sum {sums[worst]:.6g} MW)"
    )
    return list(aligned_windows(values, sample_rate_hz, config.amplitude_window_s))[worst]


def cmd_check(
    config: StudyConfig,
    series_path: Path,
    tables: TableViewsController,
    limit_mw: Optional[float] = None,
    bus: Optional[int] = None,
) -> int:
    """FFT compliance of a measured site series against its allocation."""
    out = EnsureOutputDirectories(config.out)
    values, sample_rate_hz, file_bus = parse_measured_series(series_path)
    site = bus if bus is not None else file_bus
    if limit_mw is None:
        allocations = read_plan_allocations(_artifact(config, PLAN_JSON, "plan"))
        if site is None or site not in allocations:
            raise ConfigurationError(
                f"no allocation for bus {site} in {PLAN_JSON}; pass --limit-mw or --bus"
            )
        limit_mw = allocations[site]
    window = _worst_window(values, sample_rate_hz, config)
    result = compliance_check(
        window, sample_rate_hz, limit_mw, config.f_sync_hz, config.amplitude_window_s, site
    )
    export_compliance(out, result)
    tables.display(tables.create_compliance_table({site: result}))
    return 0 if result.passed else 1


def cmd_run_all(
    config: StudyConfig, tables: TableViewsController, scenario_path: Optional[Path] = None
) -> int:
    """limits, ifs, plan and optionally validate; the worst exit code wins."""
    codes = [cmd_limits(config, tables), cmd_ifs(config, tables), cmd_plan(config, tables)]
    if scenario_path is not None:
        codes.append(cmd_validate(config, scenario_path, tables))
    code = max(codes)
    if code:
        logger.warning(f"Pipeline finished with exit code {code}")
    return code

