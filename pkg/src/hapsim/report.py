"""Campaign artifacts: per-user CSV, aggregate report, CDF data.

All writers emit deterministic bytes for identical inputs: fixed column
order, fixed row order (terminal id), and shortest-round-trip float
formatting.  ``read_users_csv`` parses what ``write_users_csv`` emits, so
artifacts can be post-processed without guessing the schema.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .consumption import AssessmentRow
from .errors import ConfigError
from .simulation import CampaignResult

__all__ = [
    "USER_CSV_COLUMNS",
    "write_users_csv",
    "read_users_csv",
    "write_report",
    "write_cdf",
    "write_consumption_csv",
]

USER_CSV_COLUMNS = (
    "terminal_id", "x", "y", "kind", "los", "serving_cell",
    "dl_se", "ul_se", "outage",
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_users_csv(path, rows: Sequence[dict]) -> None:
    """Per-user results, one line per terminal in id order."""
    lines = [",".join(USER_CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in USER_CSV_COLUMNS))
    Path(path).write_text("\n".join(lines) + "\n")


def read_users_csv(path) -> list[dict]:
    """Parse a per-user CSV back into typed records."""
    text = Path(path).read_text().splitlines()
    if not text or text[0].split(",") != list(USER_CSV_COLUMNS):
        raise ConfigError(f"{path}: not a per-user results file")
    rows = []
    for line in text[1:]:
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(USER_CSV_COLUMNS):
            raise ConfigError(f"{path}: malformed row {line!r}")
        rows.append({
            "terminal_id": int(parts[0]),
            "x": float(parts[1]),
            "y": float(parts[2]),
            "kind": parts[3],
            "los": parts[4] == "1",
            "serving_cell": int(parts[5]),
            "dl_se": float(parts[6]),
            "ul_se": float(parts[7]),
            "outage": parts[8] == "1",
        })
    return rows


def format_report(result: CampaignResult, scenario_name: str = "custom") -> str:
    """Human-readable aggregate summary (stable key = value lines)."""
    cfg = result.config
    rep = result.report
    lines = [
        f"scenario = {scenario_name}",
        f"architecture = {cfg.architecture}",
        f"layout = {cfg.layout}",
        f"attachment_mode = {cfg.attachment_mode}",
        f"terminal_kind = {cfg.terminal_kind}",
        f"seed = {cfg.seed}",
        f"terminals = {rep.n_terminals}",
        f"los_terminals = {rep.n_los}",
        f"dl_mean_se = {rep.dl.mean_se:.6f}",
        f"dl_cell_edge_se = {rep.dl.cell_edge_se:.6f}",
        f"dl_outage_count = {rep.dl.outage_count}",
        f"ul_mean_se = {rep.ul.mean_se:.6f}",
        f"ul_cell_edge_se = {rep.ul.cell_edge_se:.6f}",
        f"ul_outage_count = {rep.ul.outage_count}",
    ]
    return "\n".join(lines) + "\n"


def write_report(path, result: CampaignResult, scenario_name: str = "custom") -> None:
    Path(path).write_text(format_report(result, scenario_name))


def write_cdf(path, values) -> None:
    """Empirical CDF as two-column text: value, cumulative fraction."""
    ordered = np.sort(np.asarray(values, dtype=float))
    n = ordered.size
    lines = ["# se_bit_per_s_per_hz cumulative_fraction"]
    for i, v in enumerate(ordered):
        lines.append(f"{float(v)!r} {(i + 1) / n!r}")
    Path(path).write_text("\n".join(lines) + "\n")


CONSUMPTION_CSV_COLUMNS = (
    "terminal_id", "d1_m", "d2_m", "d3_m", "rhs", "relay_preferred",
    "margin", "feeder_access_ratio_sq",
)


def write_consumption_csv(path, rows: Sequence[AssessmentRow]) -> None:
    """Per-terminal relay-versus-direct verdicts."""
    lines = [",".join(CONSUMPTION_CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (
            r.terminal_id, r.d1_m, r.d2_m, r.d3_m, r.rhs,
            r.relay_preferred, r.margin, r.feeder_access_ratio_sq,
        )))
    Path(path).write_text("\n".join(lines) + "\n")
