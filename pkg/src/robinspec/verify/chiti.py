"""Comparison of ``ψ_1*`` with the ball profile ``z_1*`` and the differential inequality behind it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..ballspec import lp_norm_radial, unit_ball_volume
from ..errors import CrossingError, DomainError
from ..femspec import PolygonDomain
from ..rearrange import (
    Profile,
    TransferReport,
    hybrid_grid,
    lp_norm_profile,
    transfer_check,
)
from .common import DIM, CaseData, case_data, psi_profile, z_profile
from .reports import InequalityReport, make_report

__all__ = [
    "ChitiComparison",
    "chiti_comparison",
    "lemma32_residual",
    "lemma32_report",
    "chiti_reports",
    "top_cap_measure",
]

BAND_FACTOR = 3.0
# the P1 derivative error near the maximum decays like h / sqrt(s), so the
# differential-inequality window starts at an h-independent fraction of |Ω_M|
LEMMA32_WINDOW_FRACTION = 0.02
GRID_FLOOR = 1e-6


@dataclass(frozen=True)
class ChitiComparison:
    """Outcome of comparing the normalized profiles on ``[0, |B_R|]``."""

    p: float
    profile_psi: Profile = field(repr=False)
    profile_z: Profile = field(repr=False)
    case: str
    s0: float | None
    crossing_count: int
    s_grid: np.ndarray = field(repr=False, default=None)
    difference: np.ndarray = field(repr=False, default=None)
    band: np.ndarray = field(repr=False, default=None)
    ball_measure: float = float("nan")

    def __post_init__(self):
        if self.case not in ("dominated", "single_crossing"):
            raise ValueError(f"unknown case {self.case!r}")
        if self.case == "dominated" and self.s0 is not None:
            raise ValueError("dominated comparisons have no crossing point")
        if self.case == "single_crossing" and self.crossing_count != 1:
            raise ValueError("single-crossing comparisons need exactly one crossing")


def _significant_signs(d, band):
    sig = np.zeros(d.shape, dtype=int)
    sig[d > BAND_FACTOR * band] = 1
    sig[d < -BAND_FACTOR * band] = -1
    return sig


def classify(s, d, band):
    """``(case, s0, crossing_count)`` from samples of ``z* - ψ*`` and a band.

    Raises
    ------
    CrossingError
        More than one significant sign change, or a pattern that is
        inconsistent with the case decided at the right end point.
    """
    sig = _significant_signs(d, band)
    nz = sig[sig != 0]
    changes = int(np.count_nonzero(np.diff(nz))) if nz.size else 0
    dominated = d[-1] >= -BAND_FACTOR * band[-1]
    if changes > 1:
        raise CrossingError(f"{changes} sign changes of z* - ψ* beyond the band")
    if dominated:
        if nz.size and nz.min() < 0:
            raise CrossingError("z* < ψ* on a set although z*(|B_R|) >= ψ*(|B_R|)")
        return "dominated", None, 0
    if changes != 1 or nz[0] != 1:
        raise CrossingError("z*(|B_R|) < ψ*(|B_R|) but no positive-to-negative crossing found")
    i_pos = np.nonzero(sig == 1)[0]
    i_neg = np.nonzero(sig == -1)[0]
    last_pos = i_pos[i_pos < i_neg[0]][-1]
    j = last_pos
    seg = np.nonzero((d[last_pos:i_neg[0]] >= 0) & (d[last_pos + 1:i_neg[0] + 1] < 0))[0]
    if seg.size:
        j = last_pos + seg[-1]
    d0, d1 = d[j], d[j + 1]
    s0 = s[j] + (s[j + 1] - s[j]) * d0 / (d0 - d1) if d0 != d1 else s[j]
    return "single_crossing", float(s0), 1


def normalized_profiles(case: CaseData, p: float):
    """``ψ_1*`` scaled so ``∫_Ω ψ^p = ∫_{B_R} z_1^p``, and ``z_1*``."""
    psi = psi_profile(case.domain, case.beta, case.h)
    z = z_profile(case.domain, case.beta, case.h)
    c = lp_norm_radial(case.z1, p) / lp_norm_profile(psi, p)
    return psi.scaled(c), z


def chiti_comparison(domain: PolygonDomain, beta: float, p: float = 2.0, h: float = 0.02,
                     slack_rel: float | None = None) -> ChitiComparison:
    """Compare ``z_1*`` on ``B_R`` with the p-normalized ``ψ_1*``.

    Sign changes of ``z* - ψ*`` are counted only where the difference exceeds
    three times the band ``slack·max(z*, ψ*)``.
    """
    if not p > 0:
        raise DomainError("p must be positive")
    case = case_data(domain, float(beta), float(h))
    if math.isinf(case.beta):
        raise DomainError("the comparison needs a finite β")
    psi, z = normalized_profiles(case, p)
    ball = z.total_measure
    s = np.unique(np.concatenate([hybrid_grid(ball), z.s]))
    s = s[s <= ball]
    zs = np.interp(s, z.s, z.values)
    ps = np.interp(s, psi.s, psi.values)
    d = zs - ps
    rel = case.slack_rel if slack_rel is None else slack_rel
    band = rel * np.maximum(zs, ps)
    try:
        kind, s0, count = classify(s, d, band)
    except CrossingError as exc:
        raise CrossingError(str(exc), comparison=(psi, z)) from None
    return ChitiComparison(float(p), psi, z, kind, s0, count, s, d, band, ball)


def top_cap_measure(pair, layers: int = 2) -> float:
    """Measure of the ``layers``-ring patch of triangles around the maximum node.

    The P1 interpolant is a pyramid there, so ``dψ*/ds`` is not resolved on
    this set.
    """
    mesh = pair.mesh
    node = int(np.argmax(pair.psi1))
    nodes = {node}
    tri_mask = np.zeros(mesh.n_triangles, dtype=bool)
    for _ in range(layers):
        tri_mask = np.isin(mesh.triangles, list(nodes)).any(axis=1)
        nodes = set(np.unique(mesh.triangles[tri_mask]).tolist())
    return float(mesh.areas[tri_mask].sum())


def lemma32_residual(profile: Profile, lambda1: float, n: int, omega_m_volume: float,
                     delta: float | None = None, n_grid: int = 2048) -> float:
    """Largest relative violation of ``-dψ*/ds <= c_n s^{2/n-2} λ_1 ∫_0^s ψ*``.

    ``c_n = n^{-2} ω_n^{-2/n}``.  The derivative is a three-point centred
    difference on a hybrid grid of ``[0, omega_m_volume]`` and the integral a
    cumulative trapezoid on the same grid.  The window is
    ``[δ, omega_m_volume - δ]`` with ``δ`` at least two grid cells and at
    least ``1e-6·omega_m_volume``; closer to 0 the difference quotient of
    values near ``sup ψ*`` is dominated by rounding.  Returns
    ``max (lhs - rhs)/rhs`` over the window (negative when the inequality is
    strict), 0 when both sides vanish up to rounding, or inf when only the
    right side does.
    """
    if omega_m_volume > profile.total_measure * (1 + 1e-12):
        raise DomainError("omega_m_volume exceeds the profile's total measure")
    s = hybrid_grid(omega_m_volume, n_grid)
    v = np.interp(s, profile.s, profile.values)
    integral = np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(s))])
    h0, h1 = np.diff(s)[:-1], np.diff(s)[1:]
    deriv = (-(h1 / (h0 * (h0 + h1))) * v[:-2] + ((h1 - h0) / (h0 * h1)) * v[1:-1]
             + (h0 / (h1 * (h0 + h1))) * v[2:])
    si = s[1:-1]
    lhs = -deriv
    cn = n ** -2.0 * unit_ball_volume(n) ** (-2.0 / n)
    rhs = cn * si ** (2.0 / n - 2.0) * lambda1 * integral[1:-1]
    lo = max(s[2], GRID_FLOOR * omega_m_volume, 0.0 if delta is None else delta)
    hi = omega_m_volume - max(omega_m_volume - s[-3], 0.0 if delta is None else delta)
    window = (si >= lo) & (si <= hi)
    if not np.any(window):
        return 0.0
    # rounding floor of the difference quotient
    noise = 4 * np.finfo(float).eps * np.abs(v).max() / np.minimum(h0, h1)
    lhs, rhs, noise = lhs[window], rhs[window], noise[window]
    if np.all(rhs == 0):
        return 0.0 if np.all(np.abs(lhs) <= noise) else math.inf
    scale = np.maximum(np.abs(rhs), 1e-300)
    return float(np.max((lhs - rhs) / scale))


def lemma32_report(domain: PolygonDomain, beta: float, h: float, p: float = 2.0) -> InequalityReport:
    case = case_data(domain, float(beta), float(h))
    psi, _ = normalized_profiles(case, p)
    volume = case.radii.omega_m_volume
    delta = max(top_cap_measure(case.pair), LEMMA32_WINDOW_FRACTION * volume)
    viol = lemma32_residual(psi, case.pair.lambda1, DIM, volume, delta=delta)
    return make_report("lemma3.2", viol, 0.0, case.slack_rel,
                       **case.context(p=p, delta=delta, omega_m_volume=volume))


def transfer_reports(comp: ChitiComparison, context: dict, alphas=None,
                     betas=(2.0, 3.0)) -> list[InequalityReport]:
    """Exponent transfer between ``ψ*`` and ``z*`` on ``[0, |B_R|]``."""
    alphas = (1.0, comp.p) if alphas is None else alphas
    out = []
    for a in sorted(set(alphas)):
        for b in betas:
            if b < a:
                continue
            t: TransferReport = transfer_check(comp.profile_psi, comp.profile_z, a, b,
                                               comp.ball_measure)
            # margin is 0 when the premise fails: the implication holds vacuously
            lhs, rhs = (t.lhs, t.rhs) if t.premise else (0.0, 0.0)
            out.append(make_report("prop2.8", lhs, rhs, 1e-9,
                                   **context, alpha=a, exponent=b, premise=t.premise))
    return out


def chiti_reports(domain: PolygonDomain, beta: float, h: float, p: float = 2.0) -> list[InequalityReport]:
    """Crossing count, transfer and differential-inequality reports for one case."""
    case = case_data(domain, float(beta), float(h))
    ctx = case.context(p=p)
    comp = chiti_comparison(domain, beta, p, h)
    reports = [make_report("thm3.1", comp.crossing_count, 1.0, 0.0, **ctx, case=comp.case,
                           s0=comp.s0, ball_measure=comp.ball_measure)]
    reports += transfer_reports(comp, ctx)
    reports.append(lemma32_report(domain, beta, h, p))
    return reports
