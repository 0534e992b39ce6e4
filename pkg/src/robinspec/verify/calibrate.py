"""One-off calibration of the slack constant on the polygonal unit disk.

The disk is the equality case of every checked inequality, so each margin
it produces is pure discretization error.  The constant is the largest of
these errors, measured relative to the size of the compared quantity and
divided by ``h + 1/m``, times a safety factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..ballspec import robin_eigenvalue_ball, second_eigenvalue_check
from ..femspec import make_domain
from .checks import faber_krahn_robin, gap_bound_general, reverse_holder, theorem11_bound
from .chiti import lemma32_report
from .common import DIM, case_data

__all__ = ["Calibration", "calibrate_slack", "CALIBRATION_BETAS", "SAFETY_FACTOR"]

CALIBRATION_BETAS = (0.1, 1.0, 10.0, 100.0)
SAFETY_FACTOR = 2.0


@dataclass(frozen=True)
class Calibration:
    constant: float
    h: float
    m: int
    errors: dict = field(default_factory=dict)

    @property
    def worst(self) -> tuple[str, float]:
        key = max(self.errors, key=self.errors.get)
        return key, self.errors[key]


def _rel(report) -> float:
    return abs(report.margin) / max(abs(report.lhs), abs(report.rhs))


def calibrate_slack(h: float = 0.02, m: int = 512, betas=CALIBRATION_BETAS,
                    safety: float = SAFETY_FACTOR) -> Calibration:
    """Measure disk discretization errors and return the implied constant.

    Errors collected per ``β``: relative errors of ``λ_1`` and ``λ_2``
    against the Bessel roots, the relative margins of the Faber–Krahn,
    ratio, reverse Hölder and gap checks, and the (positive part of the)
    differential-inequality residual.
    """
    disk = make_domain("disk", m=m)
    errors: dict[str, float] = {}
    for beta in betas:
        case = case_data(disk, beta, h)
        r_star = case.radii.r_star
        lam1 = robin_eigenvalue_ball(DIM, r_star, beta, 0, 1).eigenvalue
        lam2 = second_eigenvalue_check(DIM, r_star, beta)[0]
        errors[f"lambda1@{beta:g}"] = abs(case.pair.lambda1 - lam1) / lam1
        errors[f"lambda2@{beta:g}"] = abs(case.pair.lambda2 - lam2) / lam2
        errors[f"eq12.6@{beta:g}"] = _rel(faber_krahn_robin(disk, beta, h))
        errors[f"thm1.1@{beta:g}"] = _rel(theorem11_bound(disk, beta, h, estimate_rm_error=False))
        errors[f"thm1.6@{beta:g}"] = _rel(reverse_holder(disk, beta, 1.0, 2.0, h))
        for rep in gap_bound_general(disk, beta, h):
            errors[f"{rep.claim_id}@{beta:g}"] = _rel(rep)
        errors[f"lemma3.2@{beta:g}"] = max(lemma32_report(disk, beta, h).lhs, 0.0)
    worst = max(errors.values())
    constant = safety * worst / (h + 1.0 / m)
    # two significant digits, rounded up
    exp = math.floor(math.log10(constant)) - 1
    constant = math.ceil(constant / 10 ** exp) * 10 ** exp
    return Calibration(float(f"{constant:.2g}"), h, m, errors)
