"""CSV and JSON readers/writers for every file the pipeline exchanges.

All tabular files are UTF-8 with LF line endings.  Probabilities are written
at 12 significant digits, volumes at 4 decimals.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, List, Sequence

import numpy as np

from .errors import IngestionError, ModelError
from .markov import ObservationLog, Observation, StageTransitionModel

READ_ROW_TOL = 1e-9


def fmt_prob(x: float) -> str:
    return f"{x:.12g}"


def fmt_value(x: float) -> str:
    return f"{x:.12g}"


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def read_csv(path, header: Sequence[str]) -> List[tuple]:
    """Rows as ``(line_number, row)``; the header must match exactly."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise IngestionError(f"{path}: empty file, expected header {','.join(header)}") from None
        if [c.strip() for c in first] != list(header):
            raise IngestionError(f"{path}:1: expected header {','.join(header)}, got {','.join(first)}")
        out = []
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(header):
                raise IngestionError(f"{path}:{line}: expected {len(header)} fields, got {len(row)}")
            out.append((line, [c.strip() for c in row]))
        return out


def _int(path, line, text, name):
    try:
        return int(text)
    except ValueError:
        raise IngestionError(f"{path}:{line}: {name} {text!r} is not an integer") from None


def _float(path, line, text, name):
    try:
        return float(text)
    except ValueError:
        raise IngestionError(f"{path}:{line}: {name} {text!r} is not a number") from None


OBS_HEADER = ("trajectory_id", "k", "state_index")


def write_observations(path, log: ObservationLog) -> None:
    write_csv(path, OBS_HEADER, ((r.trajectory_id, r.k, r.state_index) for r in log.records))


def read_observations(path) -> ObservationLog:
    records = []
    for line, (tid, k, s) in read_csv(path, OBS_HEADER):
        if not tid:
            raise IngestionError(f"{path}:{line}: empty trajectory_id")
        records.append(Observation(tid, _int(path, line, k, "k"), _int(path, line, s, "state_index")))
    return ObservationLog(records)


MODEL_HEADER = ("k", "from_index", "to_index", "p")


def write_model(path, model: StageTransitionModel) -> None:
    P = model.matrices
    rows = ((k + 1, i + 1, j + 1, fmt_prob(P[k, i, j]))
            for k in range(P.shape[0]) for i in range(P.shape[1]) for j in range(P.shape[2]))
    write_csv(path, MODEL_HEADER, rows)


def read_model(path, l: int | None = None) -> StageTransitionModel:
    """Parse a transition model; rows are checked at print precision, then renormalized."""
    entries = []
    for line, (k, i, j, p) in read_csv(path, MODEL_HEADER):
        entries.append((line, _int(path, line, k, "k"), _int(path, line, i, "from_index"),
                        _int(path, line, j, "to_index"), _float(path, line, p, "p")))
    if not entries:
        raise ModelError(f"{path}: no transition entries")
    stages = max(e[1] for e in entries)
    size = l or max(max(e[2], e[3]) for e in entries)
    P = np.full((stages, size, size), np.nan)
    for line, k, i, j, p in entries:
        if not (1 <= k <= stages and 1 <= i <= size and 1 <= j <= size):
            raise IngestionError(f"{path}:{line}: index out of range for {size} states")
        if not np.isnan(P[k - 1, i - 1, j - 1]):
            raise IngestionError(f"{path}:{line}: duplicate entry ({k}, {i}, {j})")
        P[k - 1, i - 1, j - 1] = p
    if np.isnan(P).any():
        k, i, j = (int(x) + 1 for x in np.argwhere(np.isnan(P))[0])
        raise ModelError(f"{path}: missing entry k={k}, from={i}, to={j}")
    StageTransitionModel(P).validate(tol=READ_ROW_TOL)
    P = P / P.sum(axis=2, keepdims=True)
    return StageTransitionModel(P, alpha=float("nan"))


def write_histogram(path, model: StageTransitionModel, k: int) -> None:
    write_csv(path, ("from_index", "to_index", "p"),
              ((i, j, fmt_prob(p)) for i, j, p in model.histogram(k)))


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise IngestionError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None


def write_json(path, data) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
