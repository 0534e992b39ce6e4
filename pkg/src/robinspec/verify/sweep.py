"""Eigenvalue-ratio sweep comparing each domain with its equal-area disk.

The ball comparison ``λ_2/λ_1(Ω, β) <= λ_2/λ_1(Ω*, β)`` is only conjectured,
so sweep rows are reported but never asserted.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from ..errors import DomainError
from ..femspec import PolygonDomain
from .checks import theorem11_bound
from .common import case_data
from .reports import InequalityReport, _csv_value, make_report, slack_fraction

__all__ = ["SweepRow", "ratio_sweep", "sweep_to_csv", "sweep_reports"]


@dataclass(frozen=True)
class SweepRow:
    domain: str
    beta: float
    h: float
    ratio: float
    ball_ratio: float
    conjecture_margin: float
    theorem_margin: float
    slack: float
    stress: bool


def _row(domain: PolygonDomain, beta: float, h: float) -> SweepRow:
    case = case_data(domain, beta, h)
    ratio = case.pair.ratio
    ball_ratio = case.lambda2_star / case.lambda1_star
    slack = slack_fraction(h, domain.m) * ball_ratio
    thm = theorem11_bound(domain, beta, h, estimate_rm_error=False)
    margin = ball_ratio - ratio
    return SweepRow(domain.name, beta, h, ratio, ball_ratio, margin, thm.margin, slack,
                    bool(margin < -slack))


def _row_args(args):
    return _row(*args)


def ratio_sweep(domains, betas, h: float, jobs: int = 1) -> list[SweepRow]:
    """One row per ``(domain, β)``, ordered by domain name then ``β``.

    ``stress`` marks rows where the ball comparison fails by more than the
    slack; such rows are informative and never an error.
    """
    betas = [float(b) for b in betas]
    if any(not (b > 0 and math.isfinite(b)) for b in betas):
        raise DomainError("sweep β values must be positive and finite")
    tasks = sorted(((d, b, float(h)) for d in domains for b in betas),
                   key=lambda t: (t[0].name, t[1]))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row_args, tasks))
    return [_row(*t) for t in tasks]


def sweep_reports(rows) -> list[InequalityReport]:
    return [make_report("eq12.8", r.ratio, r.ball_ratio, r.slack, domain=r.domain, beta=r.beta,
                        h=r.h, conjecture=True, conjecture_stress=r.stress,
                        theorem_margin=r.theorem_margin)
            for r in rows]


def sweep_to_csv(rows, path=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f.name for f in fields(SweepRow)])
    for r in rows:
        writer.writerow([_csv_value(v) for v in astuple(r)])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text
