# File: PowerFlow.py
# Path: /root/pkg/Src/TorsiLimit/Network/PowerFlow.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 15:40PM

"""Full Newton-Raphson AC power flow in polar coordinates.

Constant-power loads enter as PQ injections, constant-impedance loads as bus
shunt admittances. Any number of reference buses is supported: their magnitude
and angle stay fixed and are excluded from the unknown vector, which is what the
interaction-factor study needs for its multi-slack network.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

from TorsiLimit.Core.Models import Branch, BusType, Generator, NetworkCase
from TorsiLimit.ErrorHandling import DomainError, PowerFlowDivergenceError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITER = 30


def branch_admittances(branch: Branch) -> Tuple[complex, complex, complex, complex]:
    """Pi-model two-port (Yff, Yft, Ytf, Ytt) with an off-nominal tap on the from side."""
    ys = 1.0 / complex(branch.R, branch.X)
    half_b = 0.5j * branch.B
    tap = branch.tap
    return (ys + half_b) / tap**2, -ys / tap, -ys / tap, ys + half_b


def build_ybus(
    case: NetworkCase,
    include_shunts: bool = True,
    include_charging: bool = True,
    reactance_only: bool = False,
) -> np.ndarray:
    """Dense bus admittance matrix ordered like case.buses.

    Args:
        case: Network case
        include_shunts: Add bus shunt admittances
        include_charging: Keep branch line charging
        reactance_only: Drop branch resistance
    """
    n = len(case.buses)
    Y = np.zeros((n, n), dtype=complex)
    for branch in case.branches:
        if not branch.in_service:
            continue
        if reactance_only or not include_charging:
            branch = Branch(
                from_bus=branch.from_bus,
                to_bus=branch.to_bus,
                R=0.0 if reactance_only else branch.R,
                X=branch.X,
                B=branch.B if include_charging else 0.0,
                tap=branch.tap,
            )
        f = case.bus_index(branch.from_bus)
        t = case.bus_index(branch.to_bus)
        yff, yft, ytf, ytt = branch_admittances(branch)
        Y[f, f] += yff
        Y[f, t] += yft
        Y[t, f] += ytf
        Y[t, t] += ytt
    if include_shunts:
        for i, bus in enumerate(case.buses):
            Y[i, i] += bus.shunt
    return Y


def add_series_branch(Y: np.ndarray, f: int, t: int, z: complex) -> None:
    """Stamp a series impedance between bus indices f and t into Y in place."""
    y = 1.0 / z
    Y[f, f] += y
    Y[t, t] += y
    Y[f, t] -= y
    Y[t, f] -= y


@dataclass(frozen=True)
class PowerFlowProblem:
    """Numerical power-flow data in bus-index space."""

    Ybus: np.ndarray
    bus_types: Tuple[BusType, ...]
    V0: np.ndarray
    S_spec: np.ndarray
    bus_ids: Tuple[int, ...]

    @property
    def ref(self) -> np.ndarray:
        return np.array([i for i, t in enumerate(self.bus_types) if t == BusType.SLACK], dtype=int)

    @property
    def pv(self) -> np.ndarray:
        return np.array([i for i, t in enumerate(self.bus_types) if t == BusType.PV], dtype=int)

    @property
    def pq(self) -> np.ndarray:
        return np.array([i for i, t in enumerate(self.bus_types) if t == BusType.PQ], dtype=int)


@dataclass(frozen=True)
class PowerFlowSolution:
    """Converged bus voltages and the complex power injected at every bus (p.u.)."""

    bus_ids: Tuple[int, ...]
    V: np.ndarray
    injections: np.ndarray
    iterations: int
    max_mismatch: float
    load: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    _index: Dict[int, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {b: i for i, b in enumerate(self.bus_ids)})

    def index(self, bus_id: int) -> int:
        try:
            return self._index[bus_id]
        except KeyError:
            raise DomainError(f"bus {bus_id} is not part of the solution") from None

    def voltage(self, bus_id: int) -> complex:
        return complex(self.V[self.index(bus_id)])

    @property
    def generation(self) -> np.ndarray:
        """Per-bus generation: net injection plus the constant-power load served there."""
        if self.load.size == 0:
            return self.injections.copy()
        return self.injections + self.load

    @property
    def losses(self) -> complex:
        return complex(np.sum(self.injections))


def _power_mismatch(Ybus: np.ndarray, V: np.ndarray, S_spec: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    Ibus = Ybus @ V
    S = V * np.conj(Ibus)
    return S - S_spec, Ibus


def _jacobian(
    Ybus: np.ndarray, V: np.ndarray, Ibus: np.ndarray, pvpq: np.ndarray, pq: np.ndarray
) -> np.ndarray:
    diagV = np.diag(V)
    diagIbus = np.diag(Ibus)
    diagVnorm = np.diag(V / np.abs(V))
    dS_dVm = diagV @ np.conj(Ybus @ diagVnorm) + np.conj(diagIbus) @ diagVnorm
    dS_dVa = 1j * diagV @ np.conj(diagIbus - Ybus @ diagV)
    J11 = dS_dVa[np.ix_(pvpq, pvpq)].real
    J12 = dS_dVm[np.ix_(pvpq, pq)].real
    J21 = dS_dVa[np.ix_(pq, pvpq)].imag
    J22 = dS_dVm[np.ix_(pq, pq)].imag
    return np.block([[J11, J12], [J21, J22]])


def newton_raphson(
    problem: PowerFlowProblem,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> Tuple[np.ndarray, int, float]:
    """Solve the polar power-flow equations.

    Returns:
        Tuple of (complex voltages, correction iterations, final max mismatch)

    Raises:
        PowerFlowDivergenceError: mismatch above tolerance after max_iter,
            singular Jacobian or a non-finite iterate
    """
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _newton_loop(problem, tolerance, max_iter)


def _newton_loop(
    problem: PowerFlowProblem, tolerance: float, max_iter: int
) -> Tuple[np.ndarray, int, float]:
    Ybus = problem.Ybus
    V = problem.V0.astype(complex)
    pv, pq = problem.pv, problem.pq
    pvpq = np.concatenate((pv, pq)).astype(int)
    n_pvpq = pvpq.size
    Va = np.angle(V)
    Vm = np.abs(V)

    def evaluate(V: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        mis, Ibus = _power_mismatch(Ybus, V, problem.S_spec)
        F = np.concatenate((mis.real[pvpq], mis.imag[pq]))
        return F, mis, Ibus

    def worst(mis: np.ndarray) -> Tuple[int, float]:
        score = np.zeros(V.size)
        score[pvpq] = np.abs(mis.real[pvpq])
        score[pq] = np.maximum(score[pq], np.abs(mis.imag[pq]))
        k = int(np.argmax(score)) if score.size else 0
        return problem.bus_ids[k], float(score[k]) if score.size else 0.0

    F, mis, Ibus = evaluate(V)
    norm = float(np.max(np.abs(F))) if F.size else 0.0
    iterations = 0
    while not norm <= tolerance:
        if iterations >= max_iter or not np.isfinite(norm):
            bus, value = worst(mis)
            raise PowerFlowDivergenceError(bus, value, iterations)
        J = _jacobian(Ybus, V, Ibus, pvpq, pq)
        try:
            dx = -np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            bus, value = worst(mis)
            raise PowerFlowDivergenceError(bus, value, iterations, "singular Jacobian") from None
        Va[pvpq] += dx[:n_pvpq]
        Vm[pq] += dx[n_pvpq:]
        if np.any(Vm[pq] <= 0):
            bus, value = worst(mis)
            raise PowerFlowDivergenceError(bus, value, iterations + 1, "voltage collapse")
        V = Vm * np.exp(1j * Va)
        iterations += 1
        F, mis, Ibus = evaluate(V)
        norm = float(np.max(np.abs(F))) if F.size else 0.0
        logger.debug(f"NR iteration {iterations}: max mismatch {norm:.3e}")
    return V, iterations, norm


def bus_loads(case: NetworkCase) -> np.ndarray:
    """Constant-power load per bus (p.u.)."""
    load = np.zeros(len(case.buses), dtype=complex)
    for item in case.loads:
        load[case.bus_index(item.bus)] += complex(item.P, item.Q)
    return load


def build_problem(
    case: NetworkCase,
    init: Optional[np.ndarray] = None,
    extra_load: Optional[Mapping[int, complex]] = None,
) -> PowerFlowProblem:
    """Specified injections and the start vector of the base-case flow."""
    n = len(case.buses)
    load = bus_loads(case)
    for bus_id, value in (extra_load or {}).items():
        load[case.bus_index(bus_id)] += value
    S_spec = -load
    Vm = np.array([bus.voltage_mag for bus in case.buses], dtype=float)
    Va = np.zeros(n)
    for gen in case.generators:
        k = case.bus_index(gen.bus)
        S_spec[k] += gen.P
        if case.buses[k].type != BusType.PQ:
            Vm[k] = gen.V_setpoint
    for i, bus in enumerate(case.buses):
        if bus.type == BusType.SLACK:
            Va[i] = bus.angle
        elif bus.type == BusType.PQ:
            Vm[i] = 1.0
    V0 = Vm * np.exp(1j * Va)
    if init is not None:
        init = np.asarray(init, dtype=complex)
        if init.shape != (n,):
            raise DomainError(f"initial voltage profile needs {n} entries")
        V0 = init.copy()
        # regulated magnitudes and the slack angle are setpoints, not guesses
        for i, bus in enumerate(case.buses):
            if bus.type == BusType.SLACK:
                V0[i] = Vm[i] * np.exp(1j * Va[i])
            elif bus.type == BusType.PV:
                V0[i] = Vm[i] * np.exp(1j * np.angle(init[i]))
    return PowerFlowProblem(
        Ybus=build_ybus(case),
        bus_types=tuple(bus.type for bus in case.buses),
        V0=V0,
        S_spec=S_spec,
        bus_ids=case.bus_ids,
    )


def solve_power_flow(
    case: NetworkCase,
    init: Optional[np.ndarray] = None,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
    extra_load: Optional[Mapping[int, complex]] = None,
) -> PowerFlowSolution:
    """Solve the base-case flow of a network case.

    Args:
        case: Network case with exactly one slack bus
        init: Optional complex start profile (setpoints still enforced)
        tolerance: Max |dP|, |dQ| in p.u.
        max_iter: Iteration limit
        extra_load: Additional constant-power load per bus id (p.u.)
    """
    problem = build_problem(case, init, extra_load)
    if problem.ref.size != 1:
        raise DomainError(f"power flow needs exactly one slack bus, found {problem.ref.size}")
    V, iterations, mismatch = newton_raphson(problem, tolerance, max_iter)
    load = -problem.S_spec
    for gen in case.generators:
        load[case.bus_index(gen.bus)] += gen.P
    injections = V * np.conj(problem.Ybus @ V)
    logger.info(
        f"Power flow '{case.name}' converged in {iterations} iterations "
        f"(mismatch {mismatch:.2e} p.u., losses {injections.sum().real:.5f} p.u.)"
    )
    return PowerFlowSolution(
        bus_ids=case.bus_ids,
        V=V,
        injections=injections,
        iterations=iterations,
        max_mismatch=mismatch,
        load=load,
    )


def generator_outputs(
    solution: PowerFlowSolution, generators: Iterable[Generator]
) -> Dict[str, complex]:
    """Split each bus's generation among the generators connected there.

    Shares follow scheduled P; buses whose units are all scheduled at zero split evenly.
    """
    generators = tuple(generators)
    by_bus: Dict[int, list] = {}
    for gen in generators:
        by_bus.setdefault(gen.bus, []).append(gen)
    outputs: Dict[str, complex] = {}
    generation = solution.generation
    for bus_id, units in by_bus.items():
        total = complex(generation[solution.index(bus_id)])
        scheduled = sum(g.P for g in units)
        for gen in units:
            share = gen.P / scheduled if scheduled != 0 else 1.0 / len(units)
            outputs[gen.id] = total * share
    return outputs


def internal_emf(
    solution: PowerFlowSolution, generators: Iterable[Generator]
) -> Dict[str, complex]:
    """Internal EMF behind Ra + jXd'' from the converged terminal conditions.

    Raises:
        DomainError: generator bus missing from the solution or zero terminal voltage
    """
    generators = tuple(generators)
    outputs = generator_outputs(solution, generators)
    emf: Dict[str, complex] = {}
    for gen in generators:
        V = solution.voltage(gen.bus)
        if V == 0:
            raise DomainError(f"generator {gen.id}: zero terminal voltage")
        current = np.conj(outputs[gen.id] / V)
        emf[gen.id] = complex(V + complex(gen.armature_Ra, gen.subtransient_Xd2) * current)
    return emf
