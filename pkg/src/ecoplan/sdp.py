"""Backward induction over the assignment-state chain and forward occupancy.

Because the availability chain does not react to allocations, the Bellman
maximization splits: the best stage reward R*_k(X) is found once per
(stage, state) by the allocation solver, and

    J_k(X) = R*_k(X) + sum_X' P_k(X, X') J_{k+1}(X'),   J_N = terminal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .allocation import AllocationDecision, EconomicParams, optimize_allocation
from .errors import ContractError, ModelError
from .markov import StageTransitionModel
from .state_space import StateSpace

OCCUPANCY_TOL = 1e-10


@dataclass
class PolicySolution:
    values: np.ndarray        # (N, l); values[k-1, x-1] = J_k(x)
    stage_rewards: np.ndarray  # (N-1, l); R*_k(x)
    policy: Dict[Tuple[int, int], AllocationDecision] = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return self.values.shape[0]

    @property
    def terminal(self) -> np.ndarray:
        return self.values[-1]

    def value(self, k: int, index: int) -> float:
        return float(self.values[k - 1, index - 1])

    def allocation_tensor(self, m: int, n: int) -> np.ndarray:
        """Policy allocations as an ``(N-1, l, m, n)`` array."""
        N, l = self.values.shape
        out = np.zeros((N - 1, l, m, n))
        for (k, x), dec in self.policy.items():
            out[k - 1, x - 1] = dec.amounts
        return out


def backward_induction(rewards: np.ndarray, transitions: np.ndarray, terminal: np.ndarray):
    """Finite-horizon value recursion with decision-independent transitions.

    ``rewards`` is ``(N-1, l)`` (already maximized) or ``(N-1, l, A)`` for a
    finite action menu, ``transitions`` is ``(N-1, l, l)``.  Returns
    ``(values, best_action)`` where ``values`` is ``(N, l)`` and
    ``best_action`` is ``(N-1, l)`` (all zeros for 2-D rewards).
    """
    terminal = np.asarray(terminal, dtype=float)
    rewards = np.asarray(rewards, dtype=float)
    steps = rewards.shape[0]
    if transitions.shape[0] != steps:
        raise ModelError(f"{steps} reward stages but {transitions.shape[0]} transition matrices")
    if rewards.ndim == 3:
        best = np.argmax(rewards, axis=2)
        rewards = np.take_along_axis(rewards, best[..., None], axis=2)[..., 0]
    else:
        best = np.zeros(rewards.shape, dtype=np.int64)
    values = np.empty((steps + 1, terminal.shape[0]))
    values[steps] = terminal
    for k in range(steps - 1, -1, -1):
        values[k] = rewards[k] + transitions[k] @ values[k + 1]
    return values, best


def compute_stage_rewards(space: StateSpace, params: EconomicParams, N: int):
    """R*_k(X) and the maximizing allocation for k = 1..N-1 and every state."""
    rewards = np.zeros((max(N - 1, 0), space.l))
    policy = {}
    for k in range(1, N):
        for state in space:
            decision, r = optimize_allocation(state, k, params)
            rewards[k - 1, state.index - 1] = r
            policy[k, state.index] = decision
    return rewards, policy


def solve_backward(space: StateSpace, models: StageTransitionModel, params: EconomicParams,
                   terminal: Optional[np.ndarray] = None, N: Optional[int] = None) -> PolicySolution:
    N = models.horizon if N is None else N
    if models.matrices.shape[0] != N - 1:
        raise ModelError(f"horizon {N} needs {N - 1} stage matrices, model has {models.matrices.shape[0]}")
    if N > 1:
        if models.l != space.l:
            raise ModelError(f"model has {models.l} states, state space has {space.l}")
        models.validate()
    if params.horizon < N - 1:
        raise ContractError(f"economic parameters cover {params.horizon} stages, need {N - 1}")
    terminal = np.zeros(space.l) if terminal is None else np.asarray(terminal, dtype=float)
    if terminal.shape != (space.l,):
        raise ContractError(f"terminal values must have length {space.l}")
    rewards, policy = compute_stage_rewards(space, params, N)
    values, _ = backward_induction(rewards, models.matrices[:N - 1], terminal)
    return PolicySolution(values, rewards, policy)


@dataclass
class OccupancyReport:
    occupancy: np.ndarray     # (N, l)
    monthly_use: np.ndarray   # (N-1, m, n) expected allocation per stage
    expected_use: np.ndarray  # (m, n) horizon totals

    @property
    def ratios(self) -> np.ndarray:
        return use_ratios(self.expected_use)


def use_ratios(amounts) -> np.ndarray:
    """Share of each resource in each user's total; NaN where a user gets nothing."""
    amounts = np.asarray(amounts, dtype=float)
    totals = amounts.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(totals > 0, amounts / np.where(totals > 0, totals, 1.0), np.nan)


def report_from_amounts(amounts) -> OccupancyReport:
    """Wrap externally supplied annual amounts (e.g. published tables) for rendering."""
    amounts = np.asarray(amounts, dtype=float)
    m, n = amounts.shape
    return OccupancyReport(np.ones((1, 1)), np.zeros((0, m, n)), amounts)


def simulate_forward(solution: PolicySolution, models: StageTransitionModel, initial,
                     m: int, n: int) -> OccupancyReport:
    initial = np.asarray(initial, dtype=float)
    if abs(initial.sum() - 1.0) > OCCUPANCY_TOL or (initial < 0).any():
        raise ContractError("initial distribution must be nonnegative and sum to 1")
    N = solution.horizon
    occupancy = np.empty((N, initial.shape[0]))
    occupancy[0] = initial
    for k in range(1, N):
        occupancy[k] = occupancy[k - 1] @ models.at(k)
    alloc = solution.allocation_tensor(m, n)
    monthly = np.einsum("kx,kxij->kij", occupancy[:N - 1], alloc)
    return OccupancyReport(occupancy, monthly, monthly.sum(axis=0))


def rollout(solution: PolicySolution, models: StageTransitionModel, initial, m: int, n: int,
            paths: int, seed: int) -> np.ndarray:
    """Monte Carlo estimate of the horizon-total expected use (cross-check)."""
    rng = np.random.default_rng(seed)
    initial = np.asarray(initial, dtype=float)
    alloc = solution.allocation_tensor(m, n)
    N, l = solution.values.shape
    state = rng.choice(l, size=paths, p=initial)
    total = np.zeros((m, n))
    for k in range(1, N):
        total += alloc[k - 1, state].sum(axis=0)
        if k == N - 1:
            break
        cdf = np.cumsum(models.at(k)[state], axis=1)
        draws = rng.random(paths)[:, None]
        state = np.minimum((draws >= cdf).sum(axis=1), l - 1)
    return total / paths
