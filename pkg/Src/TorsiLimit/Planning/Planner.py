# File: Planner.py
# Path: /root/pkg/Src/TorsiLimit/Planning/Planner.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 16:55PM

"""Data-center site screening and the iterative allocation LP.

A site's bound is the smallest P_e^max(i) / IF_ij over the generators that see
it, further capped by the compute share of its rating. The allocation LP then
maximizes the total allowable fluctuation subject to every generator's limit,
with a lower bound alpha * P_dc^max(j) per site that is relaxed by beta until
the LP becomes feasible.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from TorsiLimit.Core.Models import DataCenterSite
from TorsiLimit.ErrorHandling import DomainError
from TorsiLimit.Network.InteractionFactors import IFMatrix
from TorsiLimit.Planning.Simplex import simplex_solve

logger = logging.getLogger(__name__)

COMPUTE_CAP = "compute_cap"


@dataclass(frozen=True)
class SiteBound:
    """Screening result for one data-center bus (MW)."""

    bus: int
    P_dc_max: float
    binding: str
    grid_bound: float = math.inf
    compute_cap: float = math.inf
    existing: bool = False


@dataclass(frozen=True)
class LPResult:
    """Outcome of the alpha-relaxation loop."""

    allocations: Dict[int, float]
    alpha_final: float
    iterations: int
    feasible: bool
    objective: float = 0.0
    alternative_optima: bool = False
    excluded: Tuple[int, ...] = field(default=())

    @property
    def total_mw(self) -> float:
        return float(sum(self.allocations.values()))


def _generator_rows(
    P_e_max: Mapping[str, float], IF: IFMatrix
) -> List[Tuple[int, str, float]]:
    rows = []
    for i, gen in enumerate(IF.generators):
        if gen not in P_e_max:
            logger.warning(f"No terminal limit for {gen}; it does not constrain the plan")
            continue
        limit = float(P_e_max[gen])
        if limit < 0:
            raise DomainError(f"P_e^max of {gen} is negative")
        rows.append((i, gen, limit))
    return rows


def site_bounds(
    P_e_max: Mapping[str, float],
    IF: IFMatrix,
    sites: Sequence[DataCenterSite],
    compute_fraction: float = 0.25,
    threshold_mw: float = 0.0,
) -> List[SiteBound]:
    """Bound, screen and rank data-center sites, largest P_dc^max first.

    Sites on columns flagged invalid are dropped. The threshold filter only
    removes candidate sites; existing sites are always kept.

    Raises:
        DomainError: empty site list or a site missing from the IF matrix
    """
    if not sites:
        raise DomainError("no data-center sites to screen")
    if not 0 < compute_fraction <= 1:
        raise DomainError("compute_fraction must lie in (0, 1]")
    weights = IF.clamped()
    rows = _generator_rows(P_e_max, weights)
    bounds: List[SiteBound] = []
    for site in sites:
        if not weights.is_valid(site.bus):
            logger.warning(f"Bus {site.bus}: IF column invalid, site skipped")
            continue
        column = weights.column(site.bus)
        grid_bound = math.inf
        binding = COMPUTE_CAP
        for i, gen, limit in rows:
            if column[i] <= 0:
                continue
            candidate = limit / column[i]
            if candidate < grid_bound:
                grid_bound = candidate
                binding = gen
        if math.isinf(grid_bound):
            logger.warning(f"Bus {site.bus}: no generator sees this site; compute cap only")
        cap = compute_fraction * site.rating
        if cap <= grid_bound:
            value, binding = cap, COMPUTE_CAP
        else:
            value = grid_bound
        bounds.append(
            SiteBound(
                bus=site.bus,
                P_dc_max=value,
                binding=binding,
                grid_bound=grid_bound,
                compute_cap=cap,
                existing=site.existing,
            )
        )
    ranked = sorted(bounds, key=lambda b: (-b.P_dc_max, b.bus))
    kept = [b for b in ranked if b.existing or b.P_dc_max >= threshold_mw]
    dropped = len(ranked) - len(kept)
    if dropped:
        logger.info(f"Screening dropped {dropped} candidate sites below {threshold_mw} MW")
    return kept


def optimize_allocations(
    P_e_max: Mapping[str, float],
    IF: IFMatrix,
    bounds: Sequence[SiteBound],
    beta: float = 0.05,
    weights: Optional[Sequence[float]] = None,
) -> LPResult:
    """Maximize the weighted sum of allocations, relaxing the lower bounds by beta.

    alpha starts at 1 and drops by beta per iteration (clamped at 0) until the
    LP is feasible.
    """
    if not 0 < beta < 1:
        raise DomainError(f"beta={beta} must lie in (0, 1)")
    if not bounds:
        return LPResult(allocations={}, alpha_final=1.0, iterations=0, feasible=True)
    clamped = IF.clamped()
    buses = [b.bus for b in bounds]
    upper = np.array([b.P_dc_max for b in bounds], dtype=float)
    if np.any(upper < 0):
        raise DomainError("site bounds must be nonnegative")
    c = np.ones(len(bounds)) if weights is None else np.asarray(weights, dtype=float)
    if c.size != len(bounds):
        raise DomainError("one weight per site is required")
    rows = _generator_rows(P_e_max, clamped)
    cols = [clamped.column_index(bus) for bus in buses]
    A = np.array([[clamped.values[i, j] for j in cols] for i, _, _ in rows]).reshape(len(rows), len(cols))
    b = np.array([limit for _, _, limit in rows], dtype=float)

    q = 1
    while True:
        alpha = max(0.0, 1.0 - (q - 1) * beta)
        solution = simplex_solve(c, A, b, alpha * upper, upper, maximize=True)
        if solution.feasible:
            allocations = {bus: float(x) for bus, x in zip(buses, solution.x)}
            logger.info(
                f"Allocation LP feasible at alpha={alpha:.3f} after {q} iterations, "
                f"total {sum(allocations.values()):.3f} MW"
            )
            if solution.alternative_optima:
                logger.warning("Allocation LP has alternative optima; reporting one vertex")
            return LPResult(
                allocations=allocations,
                alpha_final=alpha,
                iterations=q,
                feasible=True,
                objective=float(solution.objective),
                alternative_optima=solution.alternative_optima,
            )
        logger.debug(f"Allocation LP infeasible at alpha={alpha:.3f}")
        if alpha == 0.0:
            return LPResult(allocations={}, alpha_final=0.0, iterations=q, feasible=False)
        q += 1


def exclusion_rerun(
    P_e_max: Mapping[str, float],
    IF: IFMatrix,
    bounds: Sequence[SiteBound],
    exclude: Sequence[int],
    beta: float = 0.05,
    weights: Optional[Sequence[float]] = None,
) -> LPResult:
    """Re-solve the allocation LP with the listed buses removed."""
    excluded = set(int(b) for b in exclude)
    unknown = excluded - {b.bus for b in bounds}
    if unknown:
        raise DomainError(f"cannot exclude buses {sorted(unknown)}: not in the plan")
    keep = [i for i, b in enumerate(bounds) if b.bus not in excluded]
    kept_weights = None if weights is None else [weights[i] for i in keep]
    result = optimize_allocations(P_e_max, IF, [bounds[i] for i in keep], beta, kept_weights)
    logger.info(f"Re-ran allocation without buses {sorted(excluded)}")
    return LPResult(
        allocations=result.allocations,
        alpha_final=result.alpha_final,
        iterations=result.iterations,
        feasible=result.feasible,
        objective=result.objective,
        alternative_optima=result.alternative_optima,
        excluded=tuple(sorted(excluded)),
    )


def binding_generators(
    result: LPResult, IF: IFMatrix, P_e_max: Mapping[str, float]
) -> Dict[str, float]:
    """Per-generator utilisation sum_j IF_ij P_dc^(j) / P_e^max(i); 1.0 means binding."""
    clamped = IF.clamped()
    usage: Dict[str, float] = {}
    for i, gen, limit in _generator_rows(P_e_max, clamped):
        load = sum(clamped.values[i, clamped.column_index(bus)] * p for bus, p in result.allocations.items())
        usage[gen] = load / limit if limit > 0 else (0.0 if load == 0 else math.inf)
    return usage


__all__ = [
    "COMPUTE_CAP",
    "LPResult",
    "SiteBound",
    "binding_generators",
    "exclusion_rerun",
    "optimize_allocations",
    "site_bounds",
]
