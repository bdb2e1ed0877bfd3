"""CSV and JSON emission for command results."""

from __future__ import annotations

import csv
import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

logger = logging.getLogger(__name__)


def format_scalar(value: Any) -> Any:
    """Exact values as ``"num/den"`` (``1/1`` too), floats by repr.

    Tuples and lists are joined with spaces so a configuration fits in a
    single CSV cell.
    """
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, (tuple, list)):
        return " ".join(str(format_scalar(v)) for v in value)
    return value


def format_row(row: dict[str, Any]) -> dict[str, Any]:
    return {k: format_scalar(v) for k, v in row.items()}


def write_csv(
    path: Path, columns: Sequence[str], rows: Sequence[dict[str, Any]]
) -> Path:
    """Write rows under a header naming every column."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns))
        writer.writeheader()
        for row in rows:
            writer.writerow(format_row(row))
    logger.info(f"Wrote {len(rows)} rows to {path}")
    return path


def sidecar_path(path: Path) -> Path:
    return Path(path).with_name(Path(path).name + ".json")


def sidecar_payload(
    version: str,
    command: str,
    config: dict[str, Any],
    columns: Sequence[str],
    extra: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """Run record written next to the CSV; carries no timestamps."""
    payload = {
        "tool": "tasepkit",
        "version": version,
        "command": command,
        "config": config,
        "columns": list(columns),
    }
    if extra:
        payload.update({k: format_scalar(v) for k, v in extra.items()})
    return payload


def write_sidecar(path: Path, payload: dict[str, Any]) -> Path:
    target = sidecar_path(path)
    target.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return target


def rows_to_json(
    rows: Sequence[dict[str, Any]], payload: dict[str, Any]
) -> str:
    """Rows plus the run record as one JSON document."""
    data = dict(payload)
    data["rows"] = [format_row(r) for r in rows]
    return json.dumps(data, indent=2) + "\n"
