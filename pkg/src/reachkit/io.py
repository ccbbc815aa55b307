"""File formats used by the CLI and service.

Point cloud CSV: first line is `# dim=D`, then one point per row as
comma-separated floats. Metric table CSV: a square matrix of floats, one
row per line; `inf` marks unreachable pairs; comment lines start with `#`.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .geometry import PointCloud

__all__ = [
    "read_cloud_csv",
    "write_cloud_csv",
    "read_metric_csv",
    "write_metric_csv",
    "format_float",
    "wire_float",
    "unwire_float",
]


def format_float(x: float) -> str:
    """Canonical float formatting: round-trippable and byte-stable."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def wire_float(x: float) -> float | None:
    """JSON carries no non-finite floats; they travel as null."""
    x = float(x)
    return x if math.isfinite(x) else None


def unwire_float(v, *, missing: float = math.inf) -> float:
    """Inverse of wire_float; null comes back as `missing` (+inf by default)."""
    return missing if v is None else float(v)


def write_cloud_csv(path, cloud: PointCloud) -> None:
    lines = [f"# dim={cloud.dim}"]
    for row in cloud.points:
        lines.append(",".join(format_float(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_cloud_csv(path) -> PointCloud:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("#"):
        raise InvalidInputError(f"{path}: missing '# dim=D' header line")
    header = lines[0].lstrip("#").strip()
    if not header.startswith("dim="):
        raise InvalidInputError(f"{path}: first line must be '# dim=D', got {lines[0]!r}")
    try:
        dim = int(header[len("dim="):])
    except ValueError as exc:
        raise InvalidInputError(f"{path}: malformed dimension in header {lines[0]!r}") from exc
    rows = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            continue
        parts = ln.split(",")
        if len(parts) != dim:
            raise InvalidInputError(
                f"{path}: row has {len(parts)} fields, header declares dim={dim}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise InvalidInputError(f"{path}: non-numeric field in row {ln!r}") from exc
    if not rows:
        raise InvalidInputError(f"{path}: no points")
    return PointCloud(np.asarray(rows, dtype=float))


def write_metric_csv(path, table: np.ndarray) -> None:
    table = np.asarray(table, dtype=float)
    lines = [",".join(format_float(v) for v in row) for row in table]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_metric_csv(path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8")
    rows = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        try:
            rows.append([float(p) for p in ln.split(",")])
        except ValueError as exc:
            raise InvalidInputError(f"{path}: non-numeric field in row {ln!r}") from exc
    if not rows:
        raise InvalidInputError(f"{path}: empty metric table")
    n = len(rows[0])
    if any(len(r) != n for r in rows) or len(rows) != n:
        raise InvalidInputError(f"{path}: metric table must be square")
    return np.asarray(rows, dtype=float)
