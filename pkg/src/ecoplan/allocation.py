"""Per-stage water allocation given an assignment state.

The stage reward over active cells is ``sum(S_ij - C_ij * u_ij)`` minus a
linear penalty on unmet demand.  Since ``sum(S_ij x_ij)`` is fixed by the
state, maximizing it is a min-cost transportation problem: resources ship
to users along active cells, and each user may also draw from a fictitious
"shortfall" supplier at the penalty price.

Volumes are handled as fixed-point integers (``VOLUME_SCALE`` units per
volume unit) and costs as exact rationals, so the solve is exact.  Among
equal-cost optima the lexicographically smallest row-major allocation is
returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Tuple

import numpy as np

from .errors import ContractError
from .state_space import AssignmentState
from .transport import MinCostFlow

VOLUME_SCALE = 10_000
VOLUME_DECIMALS = 4


def to_units(x: float) -> int:
    """Quantize down to the fixed-point grid, so no bound is ever exceeded."""
    return int(np.floor(float(x) * VOLUME_SCALE + 1e-7))


@dataclass
class EconomicParams:
    S: np.ndarray             # (m, n) reward constants
    C: np.ndarray             # (m, n) unit costs
    u_bar: np.ndarray         # (m, n) per-cell caps, inf when unbounded
    demand: np.ndarray        # (n, N)
    availability: np.ndarray  # (m, N)
    shortfall_penalty: float = 0.0
    positivity_floor: float = 0.0

    def __post_init__(self):
        self.S = np.asarray(self.S, dtype=float)
        self.C = np.asarray(self.C, dtype=float)
        if self.u_bar is None:
            self.u_bar = np.full(self.S.shape, np.inf)
        self.u_bar = np.array(
            [[np.inf if x is None else x for x in row] for row in np.asarray(self.u_bar, dtype=object)],
            dtype=float,
        ).reshape(self.S.shape)
        self.demand = np.atleast_2d(np.asarray(self.demand, dtype=float))
        self.availability = np.atleast_2d(np.asarray(self.availability, dtype=float))
        self.validate()

    @property
    def m(self) -> int:
        return self.S.shape[0]

    @property
    def n(self) -> int:
        return self.S.shape[1]

    @property
    def horizon(self) -> int:
        return self.demand.shape[1]

    def validate(self) -> None:
        m, n = self.S.shape
        for name in ("C", "u_bar"):
            if getattr(self, name).shape != (m, n):
                raise ContractError(f"{name} must have shape {(m, n)}, got {getattr(self, name).shape}")
        if self.demand.shape[0] != n:
            raise ContractError(f"demand must have {n} rows (one per user), got {self.demand.shape[0]}")
        if self.availability.shape[0] != m:
            raise ContractError(f"availability must have {m} rows (one per resource), got {self.availability.shape[0]}")
        if self.availability.shape[1] != self.demand.shape[1]:
            raise ContractError("demand and availability must cover the same number of stages")
        if not np.all(np.isfinite(self.S)) or not np.all(np.isfinite(self.C)):
            raise ContractError("S and C must be finite")
        for name in ("C", "u_bar", "demand", "availability"):
            arr = getattr(self, name)
            if np.isnan(arr).any() or (arr < 0).any():
                raise ContractError(f"{name} must be nonnegative")
        if not np.all(np.isfinite(self.demand)) or not np.all(np.isfinite(self.availability)):
            raise ContractError("demand and availability must be finite")
        if not (self.shortfall_penalty >= 0 and np.isfinite(self.shortfall_penalty)):
            raise ContractError("shortfall penalty must be a nonnegative finite number")
        if not self.positivity_floor >= 0:
            raise ContractError("positivity floor must be nonnegative")

    def scaled_costs(self, c: float) -> "EconomicParams":
        return EconomicParams(self.S, self.C * c, self.u_bar, self.demand, self.availability,
                              self.shortfall_penalty * c, self.positivity_floor)


@dataclass
class AllocationDecision:
    amounts: np.ndarray   # (m, n) volume units
    shortfall: np.ndarray  # (n,)

    def check(self, state: AssignmentState, params: EconomicParams, k: int, tol: float = 1e-9) -> None:
        x = state.matrix
        u = self.amounts
        if (u < -tol).any() or (self.shortfall < -tol).any():
            raise ContractError("allocations and shortfalls must be nonnegative")
        if (u[x == 0] > tol).any():
            raise ContractError("positive allocation on an inactive cell")
        if (u > params.u_bar + tol).any():
            raise ContractError("allocation exceeds a cell cap")
        if (u.sum(axis=1) > params.availability[:, k - 1] + tol).any():
            raise ContractError("resource availability exceeded")
        if np.abs(u.sum(axis=0) + self.shortfall - params.demand[:, k - 1]).max() > tol:
            raise ContractError("allocation plus shortfall does not match demand")


def stage_reward(state: AssignmentState, decision: AllocationDecision, params: EconomicParams) -> float:
    x = state.matrix.astype(bool)
    u = np.asarray(decision.amounts, dtype=float)
    if (u[~x] != 0).any():
        raise ContractError("support violation: allocation on a cell with x_ij = 0")
    active = (params.S - params.C * u)[x].sum()
    return float(active - params.shortfall_penalty * np.sum(decision.shortfall))


def _exact(values) -> list:
    return [Fraction(float(v)) for v in values]


def optimize_allocation(state: AssignmentState, k: int, params: EconomicParams,
                        floor: Optional[float] = None) -> Tuple[AllocationDecision, float]:
    """Reward-maximizing allocation for ``state`` at stage ``k`` (1-based)."""
    m, n = params.m, params.n
    x = state.matrix
    if x.shape != (m, n):
        raise ContractError(f"state is {x.shape[0]}x{x.shape[1]} but parameters are {m}x{n}")
    if not 1 <= k <= params.horizon:
        raise ContractError(f"stage {k} outside the parameter horizon 1..{params.horizon}")
    eps = to_units(params.positivity_floor if floor is None else floor)
    demand = [to_units(d) for d in params.demand[:, k - 1]]
    avail = [to_units(a) for a in params.availability[:, k - 1]]
    caps = [[None if np.isinf(c) else to_units(c) for c in row] for row in params.u_bar]

    # strict-positivity floor: pre-assign eps on every active cell
    base = [[eps if x[i, j] else 0 for j in range(n)] for i in range(m)]
    for i in range(m):
        for j in range(n):
            if x[i, j] and caps[i][j] is not None:
                if caps[i][j] < eps:
                    raise ContractError(f"positivity floor exceeds cap of cell ({i + 1}, {j + 1})")
                caps[i][j] -= eps
        avail[i] -= sum(base[i])
        if avail[i] < 0:
            raise ContractError(f"positivity floor exceeds availability of resource {i + 1}")
    for j in range(n):
        demand[j] -= sum(base[i][j] for i in range(m))
        if demand[j] < 0:
            raise ContractError(f"positivity floor exceeds demand of user {j + 1}")

    total = sum(demand)
    cells = m * n
    weight = total + 1
    big = weight ** cells
    rational = _exact(params.C.ravel()) + _exact([params.shortfall_penalty])
    denom = lcm(*(f.denominator for f in rational))
    int_costs = [int(f * denom) for f in rational]

    src, short = 0, m + 1
    users = m + 2
    sink = users + n
    net = MinCostFlow(sink + 1)
    for i in range(m):
        net.add_arc(src, 1 + i, avail[i], 0)
    net.add_arc(src, short, total, 0)
    arcs = {}
    for i in range(m):
        for j in range(n):
            if not x[i, j]:
                continue
            pos = i * n + j
            cap = min(avail[i], demand[j]) if caps[i][j] is None else caps[i][j]
            cost = int_costs[pos] * big + weight ** (cells - 1 - pos)
            arcs[i, j] = net.add_arc(1 + i, users + j, cap, cost)
    for j in range(n):
        net.add_arc(short, users + j, demand[j], int_costs[-1] * big)
        net.add_arc(users + j, sink, demand[j], 0)
    flow, _ = net.solve(src, sink, total)
    assert flow == total, "shortfall arcs guarantee a feasible flow"

    units = np.array(base, dtype=np.int64)
    for (i, j), arc in arcs.items():
        units[i, j] += net.flow_on(arc)
    amounts = units / VOLUME_SCALE
    shortfall = np.maximum(params.demand[:, k - 1] - amounts.sum(axis=0), 0.0)
    decision = AllocationDecision(amounts, shortfall)
    return decision, stage_reward(state, decision, params)
