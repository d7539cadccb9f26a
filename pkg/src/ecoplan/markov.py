"""Stage transition counting, smoothed maximum-likelihood estimation, and
synthetic observation logs.

Transitions are decision independent: the availability state of month k+1
depends only on the state of month k.  Stage k's matrix exists for
k = 1..N-1; the last stage has no outgoing transition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import EstimationError, IngestionError, ModelError
from .state_space import StateSpace

ROW_SUM_TOL = 1e-12


class Observation(NamedTuple):
    trajectory_id: str
    k: int
    state_index: int


@dataclass
class ObservationLog:
    records: List[Observation] = field(default_factory=list)

    @classmethod
    def from_tuples(cls, rows: Iterable[Sequence]) -> "ObservationLog":
        return cls([Observation(str(t), int(k), int(s)) for t, k, s in rows])

    def __len__(self):
        return len(self.records)

    def trajectories(self) -> dict:
        """Records grouped by trajectory id, in first-appearance order."""
        groups: dict = {}
        for pos, rec in enumerate(self.records):
            groups.setdefault(rec.trajectory_id, []).append((pos, rec))
        return groups

    def initial_frequencies(self, l: int) -> Optional[np.ndarray]:
        """Empirical distribution of stage-1 states, or None without stage-1 records."""
        hits = np.zeros(l)
        for rec in self.records:
            if rec.k == 1:
                hits[rec.state_index - 1] += 1
        total = hits.sum()
        return hits / total if total > 0 else None


@dataclass
class TransitionCounts:
    counts: np.ndarray  # (N-1, l, l), counts[k-1, i-1, j-1]

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=2)

    @property
    def n_stages(self) -> int:
        return self.counts.shape[0] + 1

    def at(self, k: int) -> np.ndarray:
        return self.counts[k - 1]


@dataclass
class StageTransitionModel:
    matrices: np.ndarray  # (N-1, l, l), matrices[k-1] is P_k
    alpha: float = 1.0
    stationary: bool = False

    @property
    def l(self) -> int:  # noqa: E743
        return self.matrices.shape[1]

    @property
    def horizon(self) -> int:
        return self.matrices.shape[0] + 1

    def at(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.matrices.shape[0]:
            raise ModelError(f"no transition matrix for stage {k} (model covers 1..{self.matrices.shape[0]})")
        return self.matrices[k - 1]

    def validate(self, tol: float = ROW_SUM_TOL) -> None:
        P = self.matrices
        if P.ndim != 3 or P.shape[1] != P.shape[2]:
            raise ModelError(f"transition tensor must have shape (N-1, l, l), got {P.shape}")
        if not np.all(np.isfinite(P)) or (P < 0).any() or (P > 1).any():
            raise ModelError("transition probabilities must lie in [0, 1]")
        dev = np.abs(P.sum(axis=2) - 1.0)
        if (dev > tol).any():
            k, i = np.unravel_index(int(np.argmax(dev)), dev.shape)
            raise ModelError(f"row {i + 1} of stage {k + 1} sums to {P[k, i].sum():.15g}, not 1")

    def histogram(self, k: int) -> List[tuple]:
        """Plot data for one stage: ``(from_index, to_index, p)`` in row-major order."""
        P = self.at(k)
        l = P.shape[0]
        return [(i + 1, j + 1, float(P[i, j])) for i in range(l) for j in range(l)]


def count_transitions(log: ObservationLog, space: StateSpace | int, N: int) -> TransitionCounts:
    l = space if isinstance(space, int) else space.l
    if N < 2:
        raise IngestionError("at least two stages are needed to observe a transition")
    counts = np.zeros((N - 1, l, l), dtype=np.int64)
    for tid, recs in log.trajectories().items():
        prev = None
        for pos, rec in recs:
            if not 1 <= rec.state_index <= l:
                raise IngestionError(f"record {pos + 1} {tuple(rec)}: state index outside 1..{l}")
            if not 1 <= rec.k <= N:
                raise IngestionError(f"record {pos + 1} {tuple(rec)}: stage outside 1..{N}")
            if prev is not None:
                if rec.k <= prev.k:
                    raise IngestionError(
                        f"record {pos + 1} {tuple(rec)}: stage does not increase within trajectory {tid!r}"
                    )
                if rec.k == prev.k + 1:
                    counts[prev.k - 1, prev.state_index - 1, rec.state_index - 1] += 1
            prev = rec
    return TransitionCounts(counts)


def estimate(counts: TransitionCounts, alpha: float = 1.0, l: Optional[int] = None,
             stationary: bool = False) -> StageTransitionModel:
    """Add-alpha smoothed estimate ``(N_ij + alpha) / (N_i + alpha * l)``.

    With ``alpha == 0`` this is the plain count ratio and every row must have
    been observed.  ``stationary=True`` pools counts over all stages and
    repeats the single pooled matrix at every stage.
    """
    if alpha < 0:
        raise EstimationError(f"smoothing strength must be nonnegative, got {alpha}")
    C = counts.counts
    if l is not None and C.shape[1] != l:
        raise EstimationError(f"counts are {C.shape[1]}x{C.shape[1]} but l = {l}")
    l = C.shape[1]
    if stationary:
        C = np.broadcast_to(C.sum(axis=0), C.shape)
    totals = C.sum(axis=2)
    if alpha == 0:
        empty = np.argwhere(totals == 0)
        if len(empty):
            k, i = (int(x) + 1 for x in empty[0])
            label = "pooled stages" if stationary else f"stage {k}"
            raise EstimationError(
                f"state {i} never observed at {label}; maximum likelihood row undefined (use alpha > 0)",
                stage=k, state_index=i,
            )
    P = (C + alpha) / (totals[..., None] + alpha * l)
    return StageTransitionModel(np.ascontiguousarray(P, dtype=float), float(alpha), bool(stationary))


def random_model(l: int, N: int, seed: int, concentration: float = 0.5) -> StageTransitionModel:
    """Dirichlet-distributed rows; used to build synthetic ground-truth chains."""
    rng = np.random.default_rng(seed)
    P = rng.dirichlet(np.full(l, concentration), size=(N - 1, l))
    return StageTransitionModel(P, alpha=0.0)


def synthesize_log(space: StateSpace | int, truth: StageTransitionModel, trajectories: int,
                   seed: int, initial: Optional[np.ndarray] = None) -> ObservationLog:
    """Sample ``trajectories`` histories of length N from ``truth``.

    Trajectory ``t`` (1-based, id ``str(t)``) draws from its own stream seeded
    by ``(seed, t)``, so any subset can be regenerated independently.  The
    initial state is uniform unless ``initial`` is given.
    """
    l = space if isinstance(space, int) else space.l
    truth.validate(tol=1e-9)
    if truth.l != l:
        raise ModelError(f"truth model has {truth.l} states, state space has {l}")
    N = truth.horizon
    p0 = np.full(l, 1.0 / l) if initial is None else np.asarray(initial, dtype=float)
    cdf0 = np.cumsum(p0)
    cdfs = np.cumsum(truth.matrices, axis=2)
    records: List[Observation] = []
    for t in range(1, trajectories + 1):
        rng = np.random.default_rng([seed, t])
        draws = rng.random(N)
        tid = str(t)
        s = min(int(np.searchsorted(cdf0, draws[0], side="right")), l - 1)
        records.append(Observation(tid, 1, s + 1))
        for k in range(1, N):
            s = min(int(np.searchsorted(cdfs[k - 1, s], draws[k], side="right")), l - 1)
            records.append(Observation(tid, k + 1, s + 1))
    return ObservationLog(records)
