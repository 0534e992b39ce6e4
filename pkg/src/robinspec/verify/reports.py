"""Report records, the discretization slack model and JSON/CSV writers."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

__all__ = [
    "InequalityReport",
    "SLACK_CONSTANT",
    "slack_fraction",
    "make_report",
    "reports_to_json",
    "reports_to_csv",
    "format_float",
    "to_json_text",
]

# Frozen after calibration on the 512-gon unit disk at h = 0.02; see
# ``robinspec.verify.calibrate`` and the test that re-checks it.
SLACK_CONSTANT = 0.43


def slack_fraction(h: float, m: int | None, constant: float = SLACK_CONSTANT) -> float:
    """Relative slack ``C (h + 1/m)``; ``1/m`` is dropped for straight polygons."""
    return constant * (h + (0.0 if not m else 1.0 / m))


@dataclass(frozen=True)
class InequalityReport:
    """One checked claim ``lhs <= rhs`` with ``margin = rhs - lhs``.

    ``holds`` is recomputed from the stored numbers, never set by hand.
    """

    claim_id: str
    lhs: float
    rhs: float
    margin: float
    holds: bool
    context: dict = field(default_factory=dict)
    discretization_slack: float = 0.0

    def __post_init__(self):
        if self.holds != (self.margin >= -self.discretization_slack):
            raise ValueError("holds flag inconsistent with margin and slack")

    @property
    def asserted(self) -> bool:
        """Conjecture rows are reported but never count as failures."""
        return not self.context.get("conjecture", False)

    def recompute_holds(self) -> bool:
        return (self.rhs - self.lhs) >= -self.discretization_slack

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
            "context": dict(self.context),
            "discretization_slack": self.discretization_slack,
        }


def make_report(claim_id: str, lhs: float, rhs: float, slack: float = 0.0,
                **context) -> InequalityReport:
    lhs, rhs, slack = float(lhs), float(rhs), float(slack)
    margin = rhs - lhs
    return InequalityReport(claim_id, lhs, rhs, margin, bool(margin >= -slack), context, slack)


def format_float(x: float) -> str:
    if math.isinf(x) and x > 0:
        return '"dirichlet"'
    if math.isnan(x) or math.isinf(x):
        return "null"
    return "%.17g" % x


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "to_dict"):
        return _encode(obj.to_dict(), indent, level)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def to_json_text(obj: Any, indent: int = 2) -> str:
    """JSON with every float at 17 significant digits and ``inf`` as ``"dirichlet"``."""
    return _encode(obj, indent, 0) + "\n"


def reports_to_json(reports, path=None) -> str:
    text = to_json_text([r.to_dict() for r in reports])
    if path is not None:
        Path(path).write_text(text)
    return text


_CSV_FIELDS = ["claim_id", "lhs", "rhs", "margin", "holds", "discretization_slack"]


def _csv_value(v):
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (float, np.floating)):
        return format_float(float(v)).strip('"')
    return str(v)


def reports_to_csv(reports, path=None) -> str:
    """Flat mirror of the JSON: context keys become ``context.<key>`` columns."""
    ctx_keys: list[str] = []
    for r in reports:
        for k in r.context:
            if k not in ctx_keys:
                ctx_keys.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_FIELDS + [f"context.{k}" for k in ctx_keys])
    for r in reports:
        d = r.to_dict()
        row = [_csv_value(d[k]) for k in _CSV_FIELDS]
        row += [_csv_value(r.context.get(k)) for k in ctx_keys]
        writer.writerow(row)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text
