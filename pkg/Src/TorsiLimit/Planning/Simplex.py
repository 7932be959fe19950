# File: Simplex.py
# Path: /root/pkg/Src/TorsiLimit/Planning/Simplex.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 16:30PM

"""Bounded-variable revised primal simplex with Bland's anti-cycling rule.

Solves  min/max c'x  subject to  A_ub x <= b_ub,  lower <= x <= upper.
Rows get slack columns; rows violated at the starting point get an artificial
column (-e_i) minimized away in phase 1. Nonbasic variables sit at one of
their bounds, so the variable bounds never appear as rows.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from TorsiLimit.ErrorHandling import DomainError, LPUnboundedError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITER = 10000


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    x: Optional[np.ndarray]
    objective: Optional[float]
    iterations: int
    alternative_optima: bool = False

    @property
    def feasible(self) -> bool:
        return self.status == LPStatus.OPTIMAL


class _BoundedSimplex:
    """Working tableau data in equality form M z = b."""

    def __init__(
        self,
        M: np.ndarray,
        b: np.ndarray,
        lower: np.ndarray,
        upper: np.ndarray,
        basis: List[int],
        at_upper: np.ndarray,
        tol: float,
        max_iter: int,
    ) -> None:
        self.M = M
        self.b = b
        self.lower = lower
        self.upper = upper
        self.basis = basis
        self.at_upper = at_upper
        self.tol = tol
        self.max_iter = max_iter
        self.iterations = 0

    def values(self) -> np.ndarray:
        """Full solution vector with nonbasic variables at their active bounds."""
        z = np.where(self.at_upper, self.upper, self.lower)
        z[self.basis] = 0.0
        rhs = self.b - self.M @ z
        z[self.basis] = np.linalg.solve(self.M[:, self.basis], rhs)
        return z

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        B = self.M[:, self.basis]
        y = np.linalg.solve(B.T, cost[self.basis])
        return cost - self.M.T @ y

    def _entering(self, d: np.ndarray) -> Optional[int]:
        basic = set(self.basis)
        for j in range(self.M.shape[1]):
            if j in basic or self.upper[j] - self.lower[j] <= self.tol:
                continue
            if not self.at_upper[j] and d[j] < -self.tol:
                return j
            if self.at_upper[j] and d[j] > self.tol:
                return j
        return None

    def run(self, cost: np.ndarray) -> None:
        """Pivot to optimality for min cost'z."""
        while True:
            d = self.reduced_costs(cost)
            j = self._entering(d)
            if j is None:
                return
            if self.iterations >= self.max_iter:
                raise DomainError(f"simplex did not terminate in {self.max_iter} iterations")
            self.iterations += 1
            self._pivot(j)

    def _pivot(self, j: int) -> None:
        z = self.values()
        B = self.M[:, self.basis]
        w = np.linalg.solve(B, self.M[:, j])
        direction = -1.0 if self.at_upper[j] else 1.0
        # basic values move as z_B - direction * t * w
        step = self.upper[j] - self.lower[j]
        leave_pos: Optional[int] = None
        leave_to_upper = False
        for pos, var in enumerate(self.basis):
            change = -direction * w[pos]
            if change < -self.tol:
                t = (z[var] - self.lower[var]) / -change
                to_upper = False
            elif change > self.tol and math.isfinite(self.upper[var]):
                t = (self.upper[var] - z[var]) / change
                to_upper = True
            else:
                continue
            t = max(t, 0.0)
            better = t < step - self.tol
            tie = abs(t - step) <= self.tol and leave_pos is not None and var < self.basis[leave_pos]
            if better or tie:
                step = t
                leave_pos = pos
                leave_to_upper = to_upper
        if math.isinf(step):
            raise LPUnboundedError(f"objective unbounded along column {j}")
        if leave_pos is None:
            self.at_upper[j] = not self.at_upper[j]
            return
        leaving = self.basis[leave_pos]
        self.at_upper[leaving] = leave_to_upper
        self.at_upper[j] = False
        self.basis[leave_pos] = j

    def alternative_optima(self, cost: np.ndarray) -> bool:
        d = self.reduced_costs(cost)
        basic = set(self.basis)
        return any(
            abs(d[j]) <= self.tol and self.upper[j] - self.lower[j] > self.tol
            for j in range(self.M.shape[1])
            if j not in basic
        )


def simplex_solve(
    c: Sequence[float],
    A_ub: Sequence[Sequence[float]],
    b_ub: Sequence[float],
    lower: Sequence[float],
    upper: Sequence[float],
    maximize: bool = False,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> LPSolution:
    """Solve a bounded linear program.

    Args:
        c: Objective coefficients
        A_ub: Inequality matrix (rows may be empty)
        b_ub: Inequality right-hand sides
        lower: Finite lower bounds
        upper: Upper bounds (inf allowed)
        maximize: Maximize instead of minimize
        tol: Feasibility and optimality tolerance

    Returns:
        LPSolution; infeasible problems return status INFEASIBLE

    Raises:
        LPUnboundedError: finite optimum does not exist
        DomainError: malformed input
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    A = np.asarray(A_ub, dtype=float).reshape(-1, n)
    b = np.asarray(b_ub, dtype=float).reshape(-1)
    lo = np.asarray(lower, dtype=float).reshape(n)
    hi = np.asarray(upper, dtype=float).reshape(n)
    m = A.shape[0]
    if b.size != m:
        raise DomainError("A_ub and b_ub disagree in row count")
    if not np.all(np.isfinite(lo)):
        raise DomainError("lower bounds must be finite")
    if np.any(lo > hi + tol):
        return LPSolution(LPStatus.INFEASIBLE, None, None, 0)
    hi = np.maximum(hi, lo)
    cost = -c if maximize else c.copy()

    if m == 0:
        if np.any((cost < 0) & np.isinf(hi)):
            raise LPUnboundedError("objective unbounded with no constraints")
        x = np.where(cost < 0, hi, lo)
        objective = float(c @ x)
        return LPSolution(LPStatus.OPTIMAL, x, objective, 0, bool(np.any(np.abs(cost) <= tol)))

    residual = b - A @ lo
    artificial_rows = [i for i in range(m) if residual[i] < 0]
    n_art = len(artificial_rows)
    art = np.zeros((m, n_art))
    for k, i in enumerate(artificial_rows):
        art[i, k] = -1.0
    M = np.hstack((A, np.eye(m), art))
    lower_all = np.concatenate((lo, np.zeros(m), np.zeros(n_art)))
    upper_all = np.concatenate((hi, np.full(m, np.inf), np.full(n_art, np.inf)))
    basis = [n + m + artificial_rows.index(i) if i in artificial_rows else n + i for i in range(m)]
    at_upper = np.zeros(n + m + n_art, dtype=bool)
    solver = _BoundedSimplex(M, b, lower_all, upper_all, basis, at_upper, tol, max_iter)

    if n_art:
        phase1 = np.concatenate((np.zeros(n + m), np.ones(n_art)))
        solver.run(phase1)
        infeasibility = float(phase1 @ solver.values())
        if infeasibility > tol * max(1.0, float(np.max(np.abs(b)))):
            logger.debug(f"LP infeasible: phase-1 objective {infeasibility:.3e}")
            return LPSolution(LPStatus.INFEASIBLE, None, None, solver.iterations)
        solver.upper[n + m :] = 0.0

    full_cost = np.concatenate((cost, np.zeros(m + n_art)))
    solver.run(full_cost)
    z = solver.values()
    x = np.clip(z[:n], lo, hi)
    objective = float(c @ x)
    alternatives = solver.alternative_optima(full_cost)
    if alternatives:
        logger.debug("LP optimum is not unique")
    return LPSolution(LPStatus.OPTIMAL, x, objective, solver.iterations, alternatives)


__all__ = ["LPSolution", "LPStatus", "simplex_solve"]
