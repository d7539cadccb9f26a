"""Two-population replicator dynamics for sustainable (C) vs unsustainable (D) use.

    dp/dt = p (1 - p) (u q - 1)
    dq/dt = q (1 - q) (v p - 1)

with cooperation payoffs u, v > 1.  The corners (0,0) and (1,1) are the
stable outcomes (over-exploitation and sustainable use); (0,1), (1,0) are
unstable nodes and (1/v, 1/u) is a saddle whose stable manifold splits the
unit square into the two basins.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from . import kernels
from .errors import DomainError, IntegrationError

CONVERGENCE_RADIUS = 1e-4
DEFAULT_STEP = 0.01
DEFAULT_HORIZON = 200.0
UNDECIDED = "undecided"


@dataclass(frozen=True)
class GameParams:
    u: float
    v: float

    def __post_init__(self):
        if not (np.isfinite(self.u) and np.isfinite(self.v)) or self.u <= 1 or self.v <= 1:
            raise DomainError(f"payoffs must satisfy u > 1 and v > 1, got u={self.u}, v={self.v}")

    @property
    def saddle(self) -> "GameState":
        return GameState(1.0 / self.v, 1.0 / self.u)


class GameState(NamedTuple):
    p: float
    q: float


class EquilibriumReport(NamedTuple):
    name: str
    point: GameState
    det: float
    trace: float
    label: str


def rhs(s, g: GameParams):
    p, q = s
    return p * (1.0 - p) * (g.u * q - 1.0), q * (1.0 - q) * (g.v * p - 1.0)


def jacobian(s, g: GameParams) -> np.ndarray:
    p, q = s
    return np.array([
        [(1.0 - 2.0 * p) * (g.u * q - 1.0), p * (1.0 - p) * g.u],
        [q * (1.0 - q) * g.v, (1.0 - 2.0 * q) * (g.v * p - 1.0)],
    ])


def classify(det: float, trace: float) -> str:
    if det < 0:
        return "Saddle"
    if det > 0 and trace < 0:
        return "ESS"
    if det > 0 and trace > 0:
        return "Unstable"
    return "Non-hyperbolic"


def equilibria(g: GameParams) -> List[EquilibriumReport]:
    points = [("Q1", (0.0, 0.0)), ("Q2", (0.0, 1.0)), ("Q3", (1.0, 0.0)),
              ("Q4", (1.0, 1.0)), ("Q5", tuple(g.saddle))]
    out = []
    for name, pt in points:
        J = jacobian(pt, g)
        det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        tr = J[0, 0] + J[1, 1]
        out.append(EquilibriumReport(name, GameState(*pt), float(det), float(tr), classify(det, tr)))
    return out


def _limit_label(p: float, q: float, radius: float) -> str:
    if p * p + q * q <= radius * radius:
        return "Q1"
    if (p - 1.0) ** 2 + (q - 1.0) ** 2 <= radius * radius:
        return "Q4"
    return UNDECIDED


@dataclass
class Trajectory:
    t: np.ndarray
    p: np.ndarray
    q: np.ndarray
    label: str

    @property
    def final(self) -> GameState:
        return GameState(float(self.p[-1]), float(self.q[-1]))


def _n_steps(h: float, T: float) -> int:
    if not (h > 0 and T > 0):
        raise ValueError("step and horizon must be positive")
    return int(round(T / h))


def integrate(s0, g: GameParams, h: float = DEFAULT_STEP, T: float = DEFAULT_HORIZON,
              radius: float = CONVERGENCE_RADIUS) -> Trajectory:
    """Classical RK4 path, clamped to the unit square.

    The limit label is ``Q1``/``Q4`` when the end point lies within ``radius``
    of that corner.  A path that ever enters the ``radius`` ball around the
    interior saddle is labelled undecided: it sits on the separatrix to
    working precision and any later departure is roundoff amplification.
    """
    p0, q0 = s0
    if not (0.0 <= p0 <= 1.0 and 0.0 <= q0 <= 1.0):
        raise ValueError(f"start {s0} outside the unit square")
    n = _n_steps(h, T)
    ps, qs, bad = kernels.rk4_path(float(p0), float(q0), float(g.u), float(g.v), float(h), n)
    if bad >= 0:
        raise IntegrationError(f"non-finite state at step {bad} from start ({p0}, {q0})")
    t = np.arange(ps.shape[0]) * h
    sp, sq = g.saddle
    if np.min((ps - sp) ** 2 + (qs - sq) ** 2) <= radius * radius:
        label = UNDECIDED
    else:
        label = _limit_label(ps[-1], qs[-1], radius)
    return Trajectory(t, ps, qs, label)


@dataclass(frozen=True)
class Separatrix:
    """Polyline Q2 - Q5 - Q3 used as the approximate basin boundary."""
    vertices: tuple

    def boundary_q(self, p):
        (x0, y0), (x1, y1), (x2, y2) = self.vertices
        return np.interp(p, [x0, x1, x2], [y0, y1, y2])

    def predict(self, p: float, q: float) -> str:
        b = float(self.boundary_q(p))
        if q < b:
            return "Q1"
        if q > b:
            return "Q4"
        return "boundary"

    def distance(self, p: float, q: float) -> float:
        best = np.inf
        pt = np.array([p, q])
        for a, b in zip(self.vertices[:-1], self.vertices[1:]):
            a, b = np.asarray(a), np.asarray(b)
            d = b - a
            t = np.clip(np.dot(pt - a, d) / np.dot(d, d), 0.0, 1.0)
            best = min(best, float(np.linalg.norm(pt - (a + t * d))))
        return best


def separatrix_polyline(g: GameParams) -> Separatrix:
    return Separatrix(((0.0, 1.0), tuple(g.saddle), (1.0, 0.0)))


@dataclass
class BasinGrid:
    resolution: int
    centers: np.ndarray  # (R,) lattice coordinates, shared by p and q
    labels: np.ndarray   # (R, R) str; labels[i, j] is the cell at (centers[i], centers[j])

    @property
    def q4_fraction(self) -> float:
        return float(np.mean(self.labels == "Q4"))

    @property
    def q1_fraction(self) -> float:
        return float(np.mean(self.labels == "Q1"))

    def cells(self):
        for i, p in enumerate(self.centers):
            for j, q in enumerate(self.centers):
                yield float(p), float(q), str(self.labels[i, j])


def basin_grid(g: GameParams, resolution: int, h: float = DEFAULT_STEP, T: float = DEFAULT_HORIZON,
               radius: float = CONVERGENCE_RADIUS, backend: Optional[str] = None) -> BasinGrid:
    if resolution < 2:
        raise ValueError("basin resolution must be at least 2")
    R = int(resolution)
    centers = (np.arange(R) + 0.5) / R
    P, Q = np.meshgrid(centers, centers, indexing="ij")
    sp, sq = g.saddle
    kern = kernels.get(backend)
    pf, qf, status = kern.rk4_final(np.ascontiguousarray(P.ravel()), np.ascontiguousarray(Q.ravel()),
                                    float(g.u), float(g.v), float(h), _n_steps(h, T), sp, sq, radius)
    labels = np.full(R * R, UNDECIDED, dtype=object)
    labels[status == 3] = "Q1"
    labels[status == 4] = "Q4"
    for c in np.flatnonzero(status == 0):
        labels[c] = _limit_label(pf[c], qf[c], radius)
    return BasinGrid(R, centers, labels.reshape(R, R).astype(str))
