"""``params.json`` parsing and validation."""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import List, Optional

import numpy as np

from .allocation import EconomicParams
from .errors import ConfigError, ContractError
from .io import read_json
from .state_space import ProblemDims


def bundled_path(*parts: str) -> Path:
    return Path(str(resources.files("ecoplan.data").joinpath(*parts)))


@dataclass
class GameSettings:
    u: float = 2.0
    v: float = 2.0
    step: float = 0.01
    horizon: float = 200.0
    grid: int = 50
    start: tuple = (0.9, 0.9)
    record_every: int = 10


@dataclass
class RunConfig:
    dims: ProblemDims
    economics: Optional[EconomicParams] = None
    resources: Optional[List[str]] = None
    users: Optional[List[str]] = None
    alpha: float = 1.0
    stationary: bool = False
    terminal: Optional[np.ndarray] = None
    initial: Optional[np.ndarray] = None
    game: GameSettings = field(default_factory=GameSettings)
    trajectories: int = 100
    seed: int = 0


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name, {})
    if sec is None:
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(f"params: '{name}' must be an object")
    return sec


def _matrix(value, shape, where: str, allow_null: bool = False):
    try:
        arr = np.array([[np.inf if (allow_null and x is None) else x for x in row] for row in value], dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"params: '{where}' must be a numeric matrix") from None
    if arr.shape != shape:
        raise ConfigError(f"params: '{where}' must have shape {shape[0]}x{shape[1]}, got {arr.shape[0]}x{arr.shape[1] if arr.ndim > 1 else 0}")
    return arr


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("params: top level must be an object")
    d = _section(doc, "dims")
    try:
        dims = ProblemDims(int(d.get("m", 2)), int(d.get("n", 3)), int(d.get("N", 12)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"params: dims: {exc}") from None
    m, n, N = dims.m, dims.n, dims.N
    cfg = RunConfig(dims=dims)

    names = _section(doc, "names")
    for key, count in (("resources", m), ("users", n)):
        if key in names:
            if len(names[key]) != count:
                raise ConfigError(f"params: 'names.{key}' must list {count} names")
            setattr(cfg, key, [str(x) for x in names[key]])

    econ = _section(doc, "economics")
    if econ:
        for key in ("S", "C", "demand", "availability"):
            if key not in econ:
                raise ConfigError(f"params: 'economics.{key}' is required")
        u_bar = econ.get("u_bar")
        try:
            cfg.economics = EconomicParams(
                S=_matrix(econ["S"], (m, n), "economics.S"),
                C=_matrix(econ["C"], (m, n), "economics.C"),
                u_bar=None if u_bar is None else _matrix(u_bar, (m, n), "economics.u_bar", allow_null=True),
                demand=_matrix(econ["demand"], (n, N), "economics.demand"),
                availability=_matrix(econ["availability"], (m, N), "economics.availability"),
                shortfall_penalty=float(econ.get("shortfall_penalty", 0.0)),
                positivity_floor=float(econ.get("positivity_floor", 0.0)),
            )
        except ContractError as exc:
            raise ConfigError(f"params: economics: {exc}") from None

    est = _section(doc, "estimation")
    cfg.alpha = float(est.get("alpha", 1.0))
    cfg.stationary = bool(est.get("stationary", False))

    dp = _section(doc, "dp")
    for key in ("terminal", "initial"):
        if dp.get(key) is not None:
            vec = np.asarray(dp[key], dtype=float)
            setattr(cfg, key, vec)

    g = _section(doc, "game")
    cfg.game = GameSettings(
        u=float(g.get("u", 2.0)), v=float(g.get("v", 2.0)),
        step=float(g.get("step", 0.01)), horizon=float(g.get("horizon", 200.0)),
        grid=int(g.get("grid", 50)), start=tuple(float(x) for x in g.get("start", (0.9, 0.9))),
        record_every=int(g.get("record_every", 10)),
    )
    cfg.trajectories = int(_section(doc, "synthesis").get("trajectories", 100))
    cfg.seed = int(doc.get("seed", 0))
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"params file not found: {path}")
    return parse_config(read_json(path))
