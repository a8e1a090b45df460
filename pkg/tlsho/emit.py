"""Deterministic CSV/JSON rendering of result tables and atomic file output."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import numbers
import os
import sys
import tempfile
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.11e"


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]]
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return FLOAT_FORMAT % value


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, float) or hasattr(value, "dtype"):
        return format_float(float(value))
    return str(value)


def format_csv(table: Table, config_hash: str) -> str:
    buffer = io.StringIO()
    buffer.write(f"# config_hash={config_hash}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    writer.writerows([_cell(value) for value in row] for row in table.rows)
    return buffer.getvalue()


def _json_text(value: Any) -> str:
    if isinstance(value, Mapping):
        items = (f"{json.dumps(str(k))}:{_json_text(value[k])}" for k in sorted(value, key=str))
        return "{" + ",".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_json_text(item) for item in value) + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, float) or hasattr(value, "dtype"):
        number = float(value)
        return "null" if not math.isfinite(number) else format_float(number)
    return json.dumps(str(value))


def format_json(table: Table, config_hash: str, extra: Mapping[str, Any] | None = None) -> str:
    payload: dict[str, Any] = {
        "config_hash": config_hash,
        "columns": list(table.columns),
        "rows": [list(row) for row in table.rows],
        "metadata": dict(table.metadata),
    }
    if extra:
        payload.update(extra)
    return _json_text(payload) + "\n"


def render(table: Table, fmt: str, config_hash: str, extra: Mapping[str, Any] | None = None) -> str:
    if fmt == "json":
        return format_json(table, config_hash, extra)
    return format_csv(table, config_hash)


def sidecar_path(path: Path, kind: str = "peaks") -> Path:
    """``out/fourier.csv`` -> ``out/fourier.peaks.csv``."""
    return path.with_name(f"{path.stem}.{kind}{path.suffix}")


def _write_text_atomic(path: Path, text: str) -> None:
    fd, temp_path = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(temp_path, path)
    except OSError:
        try:
            os.unlink(temp_path)
        except OSError:
            pass
        raise


def write_output(text: str, path: Path | None) -> None:
    """Write to ``path`` atomically, or to stdout when ``path`` is None."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    _write_text_atomic(path, text)
    logger.info("wrote %s", path)


def emit(
    table: Table,
    fmt: str,
    config_hash: str,
    path: Path | None,
    peaks: Table | None = None,
) -> None:
    """Main table plus an optional peaks table (sidecar file, or embedded for JSON on stdout)."""
    if peaks is not None and path is None and fmt == "json":
        extra = {"peaks": {"columns": list(peaks.columns), "rows": [list(r) for r in peaks.rows]}}
        write_output(render(table, fmt, config_hash, extra), None)
        return
    write_output(render(table, fmt, config_hash), path)
    if peaks is None:
        return
    if path is None:
        write_output(render(peaks, fmt, config_hash), None)
    else:
        write_output(render(peaks, fmt, config_hash), sidecar_path(path))

