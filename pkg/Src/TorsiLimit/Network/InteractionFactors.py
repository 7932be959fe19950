# File: InteractionFactors.py
# Path: /root/pkg/Src/TorsiLimit/Network/InteractionFactors.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 16:05PM

"""Algebraic interaction factors between synchronous generators and load buses.

Each synchronous generator gets an internal bus behind Ra + jXd'' whose EMF is
frozen at its base-case value. Internal buses act as simultaneous slacks, the
original terminal buses become PQ buses carrying only their local load, and
inverter-based generators keep their PV specification. A small constant-power
load step at a data-center bus then redistributes immediately among the
internal buses; the share picked up by generator i is IF_ij.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np

from TorsiLimit.Core.Models import BusType, NetworkCase
from TorsiLimit.ErrorHandling import (
    ConfigurationError,
    DomainError,
    ErrorLevel,
    PowerFlowDivergenceError,
    report_error,
)
from TorsiLimit.Network.PowerFlow import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOLERANCE,
    PowerFlowProblem,
    PowerFlowSolution,
    add_series_branch,
    build_ybus,
    bus_loads,
    internal_emf,
    newton_raphson,
    solve_power_flow,
)

logger = logging.getLogger(__name__)

NEGATIVE_IF_TOLERANCE = 1e-9


@dataclass(frozen=True)
class IFMatrix:
    """Generator-by-bus table of algebraic interaction factors.

    Rows follow `generators`, columns follow `dc_buses`. Columns whose augmented
    flow diverged are listed in `invalid_columns` and hold NaN.
    """

    values: np.ndarray
    generators: Tuple[str, ...]
    dc_buses: Tuple[int, ...]
    perturbation_mw: float
    invalid_columns: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float).reshape(len(self.generators), len(self.dc_buses))
        object.__setattr__(self, "values", values)

    def row_index(self, generator: str) -> int:
        try:
            return self.generators.index(generator)
        except ValueError:
            raise DomainError(f"generator '{generator}' is not in the IF matrix") from None

    def column_index(self, bus: int) -> int:
        try:
            return self.dc_buses.index(bus)
        except ValueError:
            raise DomainError(f"bus {bus} is not in the IF matrix") from None

    def value(self, generator: str, bus: int) -> float:
        return float(self.values[self.row_index(generator), self.column_index(bus)])

    def column(self, bus: int) -> np.ndarray:
        return self.values[:, self.column_index(bus)].copy()

    def column_sums(self) -> np.ndarray:
        return self.values.sum(axis=0)

    def is_valid(self, bus: int) -> bool:
        return bus not in self.invalid_columns

    def clamped(self) -> "IFMatrix":
        """Nonnegative planning weights: negative entries replaced by their magnitude."""
        negatives = np.argwhere(self.values < 0)
        for i, j in negatives:
            logger.warning(
                f"Negative IF {self.values[i, j]:.3e} for {self.generators[i]} at bus "
                f"{self.dc_buses[j]}; using its magnitude"
            )
        return IFMatrix(
            values=np.abs(self.values),
            generators=self.generators,
            dc_buses=self.dc_buses,
            perturbation_mw=self.perturbation_mw,
            invalid_columns=self.invalid_columns,
        )

    def subset(self, dc_buses: Sequence[int]) -> "IFMatrix":
        cols = [self.column_index(b) for b in dc_buses]
        return IFMatrix(
            values=self.values[:, cols],
            generators=self.generators,
            dc_buses=tuple(dc_buses),
            perturbation_mw=self.perturbation_mw,
            invalid_columns=tuple(b for b in self.invalid_columns if b in dc_buses),
        )


def default_perturbation(case: NetworkCase) -> float:
    """Perturbation size in MW: 1 MW or 0.1% of system load, whichever is larger."""
    return max(1.0, 1e-3 * case.total_load_mw())


class InteractionFactorEngine:
    """Augmented multi-slack network built from a converged base case."""

    def __init__(
        self,
        case: NetworkCase,
        base: Optional[PowerFlowSolution] = None,
        tolerance: float = DEFAULT_TOLERANCE,
        max_iter: int = DEFAULT_MAX_ITER,
    ) -> None:
        self.case = case
        self.tolerance = tolerance
        self.max_iter = max_iter
        self.base = base or solve_power_flow(case, tolerance=tolerance, max_iter=max_iter)
        self.generators = self.case.synchronous_generators
        if not self.generators:
            raise DomainError("interaction factors need at least one synchronous generator")
        self._problem = self._augment()
        self._baseline_V = self._solve(self._problem.S_spec, self._problem.V0)
        self._baseline_P = self.electrical_power(self._baseline_V)
        logger.debug(
            f"Augmented network: {len(self.case.buses)} buses + {len(self.generators)} internal"
        )

    @property
    def generator_ids(self) -> Tuple[str, ...]:
        return tuple(g.id for g in self.generators)

    def _augment(self) -> PowerFlowProblem:
        case = self.case
        n = len(case.buses)
        m = len(self.generators)
        emf = internal_emf(self.base, self.generators)

        Y = np.zeros((n + m, n + m), dtype=complex)
        Y[:n, :n] = build_ybus(case)
        for k, gen in enumerate(self.generators):
            add_series_branch(Y, case.bus_index(gen.bus), n + k, complex(gen.armature_Ra, gen.subtransient_Xd2))

        sg_buses = {case.bus_index(g.bus) for g in self.generators}
        types: List[BusType] = []
        for i, bus in enumerate(case.buses):
            types.append(BusType.PQ if i in sg_buses else bus.type)
        types.extend(BusType.SLACK for _ in self.generators)

        S_spec = np.zeros(n + m, dtype=complex)
        S_spec[:n] = -bus_loads(case)
        for gen in case.generators:
            if not gen.is_synchronous:
                S_spec[case.bus_index(gen.bus)] += gen.P

        V0 = np.concatenate((self.base.V, np.array([emf[g.id] for g in self.generators])))
        top = max(case.bus_ids)
        internal_ids = tuple(top + 1 + k for k in range(m))
        self._internal = np.arange(n, n + m)
        return PowerFlowProblem(
            Ybus=Y,
            bus_types=tuple(types),
            V0=V0,
            S_spec=S_spec,
            bus_ids=case.bus_ids + internal_ids,
        )

    def _solve(self, S_spec: np.ndarray, V0: np.ndarray) -> np.ndarray:
        problem = PowerFlowProblem(
            Ybus=self._problem.Ybus,
            bus_types=self._problem.bus_types,
            V0=V0,
            S_spec=S_spec,
            bus_ids=self._problem.bus_ids,
        )
        V, _, _ = newton_raphson(problem, self.tolerance, self.max_iter)
        return V

    def electrical_power(self, V: np.ndarray) -> np.ndarray:
        """Active power leaving each internal bus into the network (p.u.)."""
        k = self._internal
        S = V[k] * np.conj(self._problem.Ybus[k, :] @ V)
        return S.real

    def solve_augmented(self, extra_load: Mapping[int, complex]) -> np.ndarray:
        """Internal-bus electrical powers with extra constant-power load (p.u. by bus id)."""
        S_spec = self._problem.S_spec.copy()
        for bus_id, value in extra_load.items():
            S_spec[self.case.bus_index(bus_id)] -= value
        V = self._solve(S_spec, self._baseline_V)
        return self.electrical_power(V)

    def column(self, bus: int, perturbation_mw: float) -> np.ndarray:
        """IF column for one load bus from a unity-power-factor load step."""
        delta_pu = perturbation_mw / self.case.system_mva
        P = self.solve_augmented({bus: complex(delta_pu, 0.0)})
        return (P - self._baseline_P) / delta_pu

    def compute(
        self,
        dc_buses: Sequence[int],
        perturbation_mw: Optional[float] = None,
        max_workers: Optional[int] = None,
    ) -> IFMatrix:
        """Evaluate every requested column; diverging columns are flagged, not raised."""
        if perturbation_mw is None:
            perturbation_mw = default_perturbation(self.case)
        if not perturbation_mw > 0:
            raise DomainError("perturbation must be positive")
        dc_buses = tuple(int(b) for b in dc_buses)
        for bus in dc_buses:
            self.case.bus_index(bus)

        def run(bus: int) -> Optional[np.ndarray]:
            try:
                return self.column(bus, perturbation_mw)
            except PowerFlowDivergenceError as e:
                report_error(
                    e,
                    component=__name__,
                    context_name="if_column",
                    context_data={"bus": bus, "perturbation_mw": perturbation_mw},
                    level=ErrorLevel.WARNING,
                )
                return None

        if max_workers and max_workers > 1 and len(dc_buses) > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                columns = list(pool.map(run, dc_buses))
        else:
            columns = [run(bus) for bus in dc_buses]

        values = np.full((len(self.generators), len(dc_buses)), np.nan)
        invalid: List[int] = []
        for j, (bus, col) in enumerate(zip(dc_buses, columns)):
            if col is None:
                invalid.append(bus)
                continue
            values[:, j] = col
            for i in np.flatnonzero(col < -NEGATIVE_IF_TOLERANCE):
                logger.warning(
                    f"Negative IF {col[i]:.3e} for {self.generators[i].id} at bus {bus} "
                    f"(meshed network)"
                )
        logger.info(
            f"IF matrix: {len(self.generators)} generators x {len(dc_buses)} buses, "
            f"perturbation {perturbation_mw:.3g} MW, {len(invalid)} invalid columns"
        )
        return IFMatrix(
            values=values,
            generators=self.generator_ids,
            dc_buses=dc_buses,
            perturbation_mw=float(perturbation_mw),
            invalid_columns=tuple(invalid),
        )


def compute_if_matrix(
    case: NetworkCase,
    dc_buses: Sequence[int],
    perturbation_mw: Optional[float] = None,
    max_workers: Optional[int] = None,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
    base: Optional[PowerFlowSolution] = None,
) -> IFMatrix:
    """Base-case flow, augmentation and one perturbed flow per data-center bus."""
    engine = InteractionFactorEngine(case, base=base, tolerance=tolerance, max_iter=max_iter)
    return engine.compute(dc_buses, perturbation_mw, max_workers)


def thevenin_reactance(
    case: NetworkCase, generator_id: str, mva_rating: Optional[float] = None
) -> float:
    """Reactance from a generator's EMF to the rest of the system.

    The other synchronous machines are grounded behind Xd'' and a slack bus
    without a synchronous machine is treated as an ideal source. Resistances,
    shunts and line charging are ignored.

    Args:
        case: Network case
        generator_id: Generator whose reactance is wanted
        mva_rating: Machine base; the system base is kept when omitted

    Raises:
        ConfigurationError: no path to ground (the reactance is undefined)
    """
    gen = case.generator(generator_id)
    Y = build_ybus(case, include_shunts=False, include_charging=False, reactance_only=True)
    for other in case.synchronous_generators:
        if other.id != gen.id:
            k = case.bus_index(other.bus)
            Y[k, k] += 1.0 / complex(0.0, other.subtransient_Xd2)
    keep = list(range(len(case.buses)))
    slack = case.bus_index(case.slack_bus.id)
    if not any(case.bus_index(g.bus) == slack for g in case.synchronous_generators):
        keep.remove(slack)
    target = case.bus_index(gen.bus)
    if target not in keep:
        X_sys = gen.subtransient_Xd2
    else:
        reduced = Y[np.ix_(keep, keep)]
        unit = np.zeros(len(keep), dtype=complex)
        unit[keep.index(target)] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            condition = np.linalg.cond(reduced)
        if not condition < 1e12:
            raise ConfigurationError(
                f"generator {generator_id}: network has no path to ground; "
                f"give operating_point.X in the shaft file"
            )
        Zth = np.linalg.solve(reduced, unit)[keep.index(target)]
        X_sys = gen.subtransient_Xd2 + float(Zth.imag)
    X = X_sys if mva_rating is None else X_sys * mva_rating / case.system_mva
    logger.debug(f"{generator_id}: Thevenin reactance {X:.4f} p.u.")
    return X


__all__ = [
    "IFMatrix",
    "InteractionFactorEngine",
    "compute_if_matrix",
    "default_perturbation",
    "thevenin_reactance",
]
