"""Tests for Network.PowerFlow."""

import math
from typing import Callable

import numpy as np
import pytest

from TorsiLimit.Core.Models import Branch, NetworkCase
from TorsiLimit.ErrorHandling import DomainError, PowerFlowDivergenceError
from TorsiLimit.Network.PowerFlow import (
    branch_admittances,
    build_ybus,
    generator_outputs,
    internal_emf,
    solve_power_flow,
)


class TestAdmittance:
    """Ybus assembly."""

    def test_two_bus_ybus(self, two_bus_case: NetworkCase) -> None:
        Y = build_ybus(two_bus_case)
        np.testing.assert_allclose(Y, [[-10j, 10j], [10j, -10j]])

    def test_off_nominal_tap(self) -> None:
        """The from side sees the series admittance scaled by 1/tap^2."""
        yff, yft, ytf, ytt = branch_admittances(Branch(1, 2, R=0.0, X=0.1, tap=2.0))
        assert yff == pytest.approx(-10j / 4)
        assert yft == pytest.approx(10j / 2)
        assert ytf == yft
        assert ytt == pytest.approx(-10j)

    def test_reactance_only_drops_resistance(self, ring_case: Callable[..., NetworkCase]) -> None:
        case = ring_case(5, resistive=True)
        assert np.any(build_ybus(case).real != 0)
        assert np.all(build_ybus(case, reactance_only=True).real == 0)


class TestNewtonRaphson:
    """Base-case flows."""

    def test_two_bus_closed_form(self, two_bus_case: NetworkCase) -> None:
        """0.5 p.u. at unity power factor over x = 0.1: V^2 (1 - V^2) = 0.05^2."""
        solution = solve_power_flow(two_bus_case, tolerance=1e-10)
        expected_mag = math.sqrt((1 + math.sqrt(1 - 4 * 0.05**2)) / 2)
        V2 = solution.voltage(2)
        assert abs(V2) == pytest.approx(expected_mag, abs=1e-8)
        assert np.angle(V2) == pytest.approx(-math.acos(expected_mag), abs=1e-8)
        assert solution.losses.real == pytest.approx(0.0, abs=1e-9)
        assert solution.injections[0].real == pytest.approx(0.5, abs=1e-9)

    def test_pv_bus_holds_setpoint(self, symmetric_case: NetworkCase) -> None:
        solution = solve_power_flow(symmetric_case)
        assert abs(solution.voltage(2)) == pytest.approx(1.0)
        assert solution.injections[1].real == pytest.approx(0.5, abs=1e-8)
        assert solution.injections[0].real == pytest.approx(0.5, abs=1e-8)

    def test_resistive_network_has_losses(self, ring_case: Callable[..., NetworkCase]) -> None:
        solution = solve_power_flow(ring_case(10, resistive=True))
        assert solution.losses.real > 0

    def test_warm_start(self, ring_case: Callable[..., NetworkCase]) -> None:
        """Starting from the converged profile needs at most one correction."""
        case = ring_case(10)
        first = solve_power_flow(case)
        again = solve_power_flow(case, init=first.V)
        assert again.iterations <= 1
        np.testing.assert_allclose(again.V, first.V, atol=1e-8)

    def test_warm_start_shape(self, two_bus_case: NetworkCase) -> None:
        with pytest.raises(DomainError):
            solve_power_flow(two_bus_case, init=np.ones(3))

    def test_divergence(self, two_bus_case: NetworkCase) -> None:
        """A load far beyond the transfer limit cannot converge."""
        with pytest.raises(PowerFlowDivergenceError) as info:
            solve_power_flow(two_bus_case, extra_load={2: complex(50.0, 0.0)})
        assert "diverged" in str(info.value)

    def test_unknown_bus(self, two_bus_case: NetworkCase) -> None:
        solution = solve_power_flow(two_bus_case)
        with pytest.raises(DomainError):
            solution.voltage(9)


class TestGeneratorTerminals:
    """Per-generator outputs and internal EMF."""

    def test_outputs_and_emf(self, two_bus_case: NetworkCase) -> None:
        """E = V + j xd'' conj(S / V) at the slack generator."""
        solution = solve_power_flow(two_bus_case, tolerance=1e-10)
        outputs = generator_outputs(solution, two_bus_case.generators)
        S = outputs["G1"]
        assert S.real == pytest.approx(0.5, abs=1e-9)
        emf = internal_emf(solution, two_bus_case.generators)["G1"]
        assert emf == pytest.approx(complex(1.0 + 0.2 * S.imag, 0.2 * S.real))

    def test_outputs_follow_schedule(self, symmetric_case: NetworkCase) -> None:
        solution = solve_power_flow(symmetric_case)
        outputs = generator_outputs(solution, symmetric_case.generators)
        assert outputs["G2"].real == pytest.approx(0.5, abs=1e-8)
