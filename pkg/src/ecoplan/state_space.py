"""Feasible 0/1 resource-user assignment matrices.

A state is an ``m x n`` binary matrix whose entry ``(i, j)`` says whether
resource ``i`` is made available to user ``j``.  Only matrices in which every
row and every column carries at least one 1 are feasible.  States are
identified by their row-major binary code (top-left bit most significant) and
indexed 1..l in ascending code order.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from math import comb
from typing import Dict, Iterator, NamedTuple, Tuple

import numpy as np

from .errors import CapacityError, StateLookupError, UnsupportedError

MAX_CELLS = 20


@dataclass(frozen=True)
class ProblemDims:
    m: int
    n: int
    N: int = 12
    max_cells: int = MAX_CELLS

    def __post_init__(self):
        for name in ("m", "n", "N"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.m * self.n > self.max_cells:
            raise CapacityError(
                f"m*n = {self.m * self.n} exceeds the enumeration limit of {self.max_cells} cells"
            )


class AssignmentState(NamedTuple):
    bits: Tuple[Tuple[int, ...], ...]
    index: int
    code: int

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.int8)

    def render(self) -> str:
        """Bit-matrix string with rows separated by ``;``, e.g. ``001;110``."""
        return ";".join("".join(str(b) for b in row) for row in self.bits)


def code_to_bits(code: int, m: int, n: int) -> Tuple[Tuple[int, ...], ...]:
    width = m * n
    flat = [(code >> (width - 1 - pos)) & 1 for pos in range(width)]
    return tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(m))


def bits_to_code(bits) -> int:
    code = 0
    for row in bits:
        for b in row:
            code = (code << 1) | int(b)
    return code


def is_feasible(bits) -> bool:
    arr = np.asarray(bits)
    return bool(arr.any(axis=1).all() and arr.any(axis=0).all())


@dataclass(frozen=True)
class StateSpace:
    dims: ProblemDims
    states: Tuple[AssignmentState, ...]
    _by_code: Dict[int, AssignmentState] = field(repr=False, compare=False, default_factory=dict)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[AssignmentState]:
        return iter(self.states)

    def __getitem__(self, index: int) -> AssignmentState:
        """1-based lookup by canonical index."""
        if not 1 <= index <= len(self.states):
            raise StateLookupError(f"state index {index} outside 1..{len(self.states)}")
        return self.states[index - 1]

    @property
    def codes(self) -> np.ndarray:
        return np.array([s.code for s in self.states], dtype=np.int64)

    @property
    def tensor(self) -> np.ndarray:
        """All states stacked as an ``(l, m, n)`` 0/1 array."""
        return np.array([s.bits for s in self.states], dtype=np.int8).reshape(
            len(self.states), self.dims.m, self.dims.n
        )


def enumerate_states(dims: ProblemDims) -> StateSpace:
    m, n = dims.m, dims.n
    if m * n > dims.max_cells:
        raise CapacityError(f"m*n = {m * n} exceeds the enumeration limit of {dims.max_cells}")
    codes = np.arange(1 << (m * n), dtype=np.int64)
    full = (1 << n) - 1
    union = np.zeros_like(codes)
    ok = np.ones(codes.shape, dtype=bool)
    for i in range(m):
        row = (codes >> (n * (m - 1 - i))) & full
        ok &= row != 0
        union |= row
    ok &= union == full
    feasible = codes[ok]
    shifts = np.arange(m * n - 1, -1, -1, dtype=np.int64)
    flat = ((feasible[:, None] >> shifts) & 1).reshape(-1, m, n).tolist()
    states = tuple(
        AssignmentState(tuple(map(tuple, rows)), idx, c)
        for idx, (c, rows) in enumerate(zip(feasible.tolist(), flat), start=1)
    )
    return StateSpace(dims, states, {s.code: s for s in states})


def count_states(dims: ProblemDims) -> int:
    """Inclusion-exclusion count of coverage-feasible matrices."""
    m, n = dims.m, dims.n
    return sum((-1) ** s * comb(m, s) * ((1 << (m - s)) - 1) ** n for s in range(m + 1))


def state_by_code(space: StateSpace, code: int) -> AssignmentState:
    try:
        return space._by_code[code]
    except KeyError:
        width = space.dims.m * space.dims.n
        if not 0 <= code < (1 << width):
            raise StateLookupError(f"code {code} out of range for a {space.dims.m}x{space.dims.n} matrix") from None
        raise StateLookupError(
            f"code {code} ({code_to_bits(code, space.dims.m, space.dims.n)}) violates row/column coverage"
        ) from None


def load_appendix_codes() -> Dict[int, int]:
    """Reference listing for the 2x3 case: listing index -> row-major code."""
    text = resources.files("ecoplan.data").joinpath("appendix_a.csv").read_text(encoding="utf-8")
    reader = csv.DictReader(text.splitlines())
    return {int(row["appendix_index"]): int(row["code"]) for row in reader}


def appendix_cross_map(space: StateSpace, appendix: Dict[int, int] | None = None) -> Dict[int, int]:
    if (space.dims.m, space.dims.n) != (2, 3):
        raise UnsupportedError("the appendix ordering only exists for m=2, n=3")
    if appendix is None:
        appendix = load_appendix_codes()
    return {a: state_by_code(space, code).index for a, code in sorted(appendix.items())}


def parse_bits(text: str) -> Tuple[Tuple[int, ...], ...]:
    """Inverse of :meth:`AssignmentState.render`."""
    return tuple(tuple(int(ch) for ch in row) for row in text.split(";"))

