"""Loading and validation of experiment result CSVs.

The renderer never recomputes statistics: rows are parsed into plain
records and plotted exactly as written. Validation happens before any
plotting so a malformed file fails fast, naming what is missing.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path

REQUIRED_COLUMNS = (
    "sweep_id",
    "parameter",
    "value",
    "rule",
    "n_trials",
    "mean_relative_utility",
    "std_error",
    "accuracy",
    "fallback_count",
    "seed",
)

_SLICE_TAG = re.compile(r"\[(?P<key>[^=\]]+)=(?P<value>[^\]]+)\]")


class SchemaError(ValueError):
    """The CSV does not conform to the experiment result schema."""


@dataclass(frozen=True)
class ResultRow:
    sweep_id: str
    parameter: str
    value: float
    rule: str
    mean: float
    std_error: float

    @property
    def slice_value(self) -> float | None:
        """Numeric value of a sweep_id slice tag like ``name[key=0.1]``."""
        match = _SLICE_TAG.search(self.sweep_id)
        return float(match.group("value")) if match else None


def load_rows(path: str | Path) -> list[ResultRow]:
    path = Path(path)
    with path.open(newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s): {', '.join(missing)}")
        rows = []
        for line_no, record in enumerate(reader, start=2):
            try:
                rows.append(
                    ResultRow(
                        sweep_id=record["sweep_id"],
                        parameter=record["parameter"],
                        value=float(record["value"]),
                        rule=record["rule"],
                        mean=float(record["mean_relative_utility"]),
                        std_error=float(record["std_error"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"{path}: bad numeric field on line {line_no}: {exc}")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def rules_in(rows: list[ResultRow]) -> list[str]:
    """Rule names in first-appearance order."""
    seen: dict[str, None] = {}
    for row in rows:
        seen.setdefault(row.rule, None)
    return list(seen)
