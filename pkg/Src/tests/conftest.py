"""Shared pytest fixtures for TorsiLimit tests."""

import math
import os
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pytest

from TorsiLimit.Core.Models import MaterialSpec, NetworkCase, ShaftAssembly
from TorsiLimit.Data.Reader import case_from_dict, parse_case, parse_material, parse_shaft
from TorsiLimit.Limits.TerminalLimits import (
    GeneratorStudy,
    GridSettings,
    LimitProfile,
    compute_limit_profile,
    prepare_generator_study,
)

FIXTURES = Path(__file__).parent / "Fixtures"

FBM_MODES_RAD_S = (99.5, 127.1, 159.8, 202.8, 298.2)


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory holding the JSON input fixtures."""
    return FIXTURES


@pytest.fixture
def fbm_shaft() -> ShaftAssembly:
    """Six-mass first-benchmark shaft with D_self = 0.4 H on every mass."""
    return parse_shaft(FIXTURES / "fbm_shaft.json")


@pytest.fixture
def fbm_material() -> MaterialSpec:
    """Per-unit-torque material matched to the benchmark shaft."""
    return parse_material(FIXTURES / "fbm_material.json")


@pytest.fixture
def aisi4130() -> MaterialSpec:
    """AISI 4130 shaft steel in MPa."""
    return parse_material(FIXTURES / "aisi4130.json")


@pytest.fixture
def tandem_shaft() -> ShaftAssembly:
    """Three-mass shaft described by geometry instead of stiffness."""
    return parse_shaft(FIXTURES / "tandem3_shaft.json")


@pytest.fixture
def fbm_study(fbm_shaft: ShaftAssembly, fbm_material: MaterialSpec) -> GeneratorStudy:
    """Benchmark shaft at P0 = 0.9 p.u. behind X = 0.83 p.u."""
    return prepare_generator_study("G1", fbm_shaft, fbm_material, 0.9, 1.0, 0.83)


@pytest.fixture
def tandem_study(tandem_shaft: ShaftAssembly, aisi4130: MaterialSpec) -> GeneratorStudy:
    return prepare_generator_study("T1", tandem_shaft, aisi4130, 0.8, 1.0, 0.6)


@pytest.fixture
def fbm_profile(fbm_study: GeneratorStudy) -> LimitProfile:
    return compute_limit_profile(fbm_study)


@pytest.fixture
def coarse_grid() -> GridSettings:
    """Coarse sweep for tests that only need the shape of the curve."""
    return GridSettings(step_hz=0.5, refine_step_hz=0.05, refine_span_hz=0.2)


@pytest.fixture
def two_bus_case() -> NetworkCase:
    """Slack generator feeding one load bus over a lossless line."""
    return parse_case(FIXTURES / "two_bus_case.json")


@pytest.fixture
def symmetric_case() -> NetworkCase:
    """Two identical generators feeding a shared load bus over identical lines."""
    return parse_case(FIXTURES / "symmetric_case.json")


def ring_case_payload(
    n_buses: int,
    resistive: bool = False,
    n_generators: int = 4,
    load_pu: float = 0.05,
) -> Dict[str, object]:
    """Ring network with chords, evenly spread generators and a load on every bus."""
    gen_buses = sorted({1 + (k * n_buses) // n_generators for k in range(n_generators)})
    total_load = load_pu * n_buses
    pv_share = total_load / len(gen_buses)
    buses: List[Dict[str, object]] = []
    for i in range(1, n_buses + 1):
        if i == gen_buses[0]:
            kind = "slack"
        elif i in gen_buses:
            kind = "PV"
        else:
            kind = "PQ"
        buses.append({"id": i, "type": kind})

    def line(a: int, b: int, x: float) -> Dict[str, object]:
        return {"from": a, "to": b, "x": x, "r": 0.2 * x if resistive else 0.0}

    branches = [line(i, i % n_buses + 1, 0.02) for i in range(1, n_buses + 1) if n_buses > 2 or i == 1]
    for i in range(1, n_buses + 1, 5):
        j = (i + n_buses // 2 - 1) % n_buses + 1
        if n_buses > 4 and j != i:
            branches.append(line(i, j, 0.05))
    generators = [
        {"id": f"G{k + 1}", "bus": bus, "p": 0.0 if k == 0 else pv_share, "xd2": 0.2}
        for k, bus in enumerate(gen_buses)
    ]
    loads = [{"bus": i, "p": load_pu, "q": 0.01} for i in range(1, n_buses + 1)]
    datacenters = [
        {"bus": i, "rating_mw": 100.0} for i in range(1, n_buses + 1) if i not in gen_buses
    ]
    return {
        "name": f"ring{n_buses}",
        "system_mva": 100.0,
        "buses": buses,
        "branches": branches,
        "generators": generators,
        "loads": loads,
        "datacenters": datacenters,
    }


@pytest.fixture
def ring_case() -> Callable[..., NetworkCase]:
    """Factory of meshed ring cases (lossless unless resistive=True)."""

    def build(n_buses: int, resistive: bool = False, n_generators: int = 4) -> NetworkCase:
        return case_from_dict(ring_case_payload(n_buses, resistive, n_generators))

    return build


def sine(
    amplitude: float,
    freq_hz: float,
    sample_rate_hz: float,
    duration_s: float,
    phase: float = 0.0,
    offset: float = 0.0,
) -> np.ndarray:
    """Sampled sinusoid helper shared by the spectral tests."""
    n = int(round(duration_s * sample_rate_hz))
    t = np.arange(n) / sample_rate_hz
    return offset + amplitude * np.sin(2.0 * math.pi * freq_hz * t + phase)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so randomized checks are reproducible."""
    return np.random.default_rng(20261019)


def optional_case_path(env_var: str) -> Optional[Path]:
    value = os.environ.get(env_var)
    return Path(value) if value else None
