"""Persisted experiment records: fixed-header CSV plus a JSON sidecar.

The CSV header is frozen; every experiment row fills the columns that apply
and leaves the rest empty.  For non-scan experiments the ``lam6_sup``
column carries the row's headline statistic (verifier supremum, inequality
ratio), which keeps single-statistic experiments plottable through the one
schema.  Timing is intentionally excluded from the CSV (the ``wall_ms``
column is written as 0) so that reruns with identical seeds produce
byte-identical files; real wall-clock lives in the JSON sidecar.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

CSV_HEADER = [
    "experiment",
    "seed",
    "s",
    "N_index",
    "lambda",
    "t_window",
    "e1_inc_sup",
    "e2_inc_sup",
    "lam6_sup",
    "h1_iu_sup",
    "slope_e1",
    "slope_e2",
    "guard_frac",
    "wall_ms",
]


@dataclass
class ExperimentRecord:
    """One persisted row plus its sidecar payload."""

    experiment: str
    seed: int | None = None
    s: float | None = None
    N_index: int | None = None
    lam: float | None = None
    t_window: float | None = None
    e1_inc_sup: float | None = None
    e2_inc_sup: float | None = None
    lam6_sup: float | None = None
    h1_iu_sup: float | None = None
    slope_e1: float | None = None
    slope_e2: float | None = None
    guard_frac: float | None = None
    wall_ms: int = 0
    extras: dict = field(default_factory=dict)

    def csv_row(self) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            return str(v)

        return [
            self.experiment,
            fmt(self.seed),
            fmt(self.s),
            fmt(self.N_index),
            fmt(self.lam),
            fmt(self.t_window),
            fmt(self.e1_inc_sup),
            fmt(self.e2_inc_sup),
            fmt(self.lam6_sup),
            fmt(self.h1_iu_sup),
            fmt(self.slope_e1),
            fmt(self.slope_e2),
            fmt(self.guard_frac),
            "0",  # timing lives in the sidecar; CSV stays seed-deterministic
        ]

    def sidecar(self) -> dict:
        d = dataclasses.asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def write_records(base: str | Path, records: list[ExperimentRecord],
                  config: dict, report: dict | None = None) -> tuple[Path, Path]:
    """Write ``base.csv`` and ``base.json``; returns both paths."""
    base = Path(base)
    base.parent.mkdir(parents=True, exist_ok=True)
    csv_path = base.with_suffix(".csv")
    json_path = base.with_suffix(".json")
    lines = [",".join(CSV_HEADER)]
    for r in records:
        row = r.csv_row()
        for cell in row:
            if "," in cell or "\n" in cell:
                raise ValueError(f"CSV cell would need quoting: {cell!r}")
        lines.append(",".join(row))
    csv_path.write_text("\n".join(lines) + "\n")
    payload = {
        "config": config,
        "config_hash": config_hash(config),
        "records": [r.sidecar() for r in records],
    }
    if report is not None:
        payload["report"] = report
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    return csv_path, json_path
