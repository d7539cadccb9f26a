"""Table-style rendering of annual allocation totals and monthly series."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .sdp import OccupancyReport

UNDEFINED_RATIO = "—"


def format_amount(x: float) -> str:
    return f"{x:.4f}"


def format_ratio(r: float) -> str:
    """Percentage at 0.1% granularity, or a dash when the share is undefined."""
    if r is None or not np.isfinite(r):
        return UNDEFINED_RATIO
    return f"{100.0 * r:.1f}"


def default_names(prefix: str, count: int) -> List[str]:
    return [f"{prefix}{i + 1}" for i in range(count)]


@dataclass
class ReportDocument:
    rows: List[tuple]          # (resource, user, amount, ratio) strings
    monthly_rows: List[tuple]  # (k, user, amount)
    text: str


def render_report(report: OccupancyReport, resources: Optional[Sequence[str]] = None,
                  users: Optional[Sequence[str]] = None) -> ReportDocument:
    use = report.expected_use
    m, n = use.shape
    resources = list(resources or default_names("resource", m))
    users = list(users or default_names("user", n))
    ratios = report.ratios
    rows = [(resources[i], users[j], format_amount(use[i, j]), format_ratio(ratios[i, j]))
            for i in range(m) for j in range(n)]
    per_user = report.monthly_use.sum(axis=1)  # (N-1, n)
    monthly_rows = [(k + 1, users[j], format_amount(per_user[k, j]))
                    for k in range(per_user.shape[0]) for j in range(n)]

    width = max(10, *(len(u) for u in users)) + 2
    head = max(len(r) for r in resources) + 2
    lines = [" " * head + f"{'':8}" + "".join(f"{u:>{width}}" for u in users)]
    for i, res in enumerate(resources):
        lines.append(f"{res:<{head}}{'Amount':8}" + "".join(f"{format_amount(use[i, j]):>{width}}" for j in range(n)))
        cells = []
        for j in range(n):
            r = format_ratio(ratios[i, j])
            cells.append(f"{r + '%' if r != UNDEFINED_RATIO else r:>{width}}")
        lines.append(" " * head + f"{'Ratio':8}" + "".join(cells))
    return ReportDocument(rows, monthly_rows, "\n".join(lines) + "\n")
