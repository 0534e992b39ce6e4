"""Inequality checks evaluated on computed spectra.

Every check returns :class:`InequalityReport` records.  The slack attached to
a report is the relative slack ``C (h + 1/m)`` times the size of the
quantity being compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..ballspec import (
    BallGapFunctions,
    gap_functions,
    lp_norm_radial,
    second_eigenvalue_check,
    unit_ball_volume,
)
from ..errors import ConvexityError, DomainError, RobinSpecError
from ..femspec import PolygonDomain, SpectralPair, radii, robin_spectrum
from ..rearrange import lp_norm_profile
from .common import DIM, base_context, case_data, psi_profile
from .reports import InequalityReport, make_report, slack_fraction

__all__ = [
    "CenterResult",
    "faber_krahn_robin",
    "theorem11_bound",
    "rm_lower_bound",
    "reverse_holder",
    "center_fixed_point",
    "gap_bound_general",
    "classical_checks",
    "is_ball",
    "PAYNE_SCHAEFER_BOUND",
]

PAYNE_SCHAEFER_BOUND = 1.0 + 4.0 / DIM
SMALL_BETA = 1e-3
MONOTONE_TOL = 1e-8

# 7-point degree-5 rule on the reference triangle (barycentric, weights sum to 1)
_S15 = math.sqrt(15.0)
_A, _B = (6 - _S15) / 21, (6 + _S15) / 21
_WA, _WB = (155 - _S15) / 1200, (155 + _S15) / 1200
_BARY = np.array([
    [1 / 3, 1 / 3, 1 / 3],
    [_A, _A, 1 - 2 * _A], [_A, 1 - 2 * _A, _A], [1 - 2 * _A, _A, _A],
    [_B, _B, 1 - 2 * _B], [_B, 1 - 2 * _B, _B], [1 - 2 * _B, _B, _B],
])
_W = np.array([9 / 40, _WA, _WA, _WA, _WB, _WB, _WB])


def is_ball(domain: PolygonDomain) -> bool:
    return domain.name.startswith("disk")


def _slack(h: float, m, *scales) -> float:
    return slack_fraction(h, m) * max(abs(float(x)) for x in scales)


class _Quadrature:
    """Quadrature points, weights and ``ψ_1²`` values for one spectral pair."""

    def __init__(self, pair: SpectralPair):
        mesh = pair.mesh
        corners = mesh.nodes[mesh.triangles]                       # (T, 3, 2)
        self.points = np.einsum("qk,tkd->tqd", _BARY, corners).reshape(-1, 2)
        self.weights = (mesh.areas[:, None] * _W[None, :]).ravel()
        psi = pair.psi1[mesh.triangles] @ _BARY.T                  # (T, 7)
        self.psi2 = (psi ** 2).ravel()

    def integral(self, values) -> float:
        return float(np.dot(self.weights, values * self.psi2))


@dataclass(frozen=True)
class CenterResult:
    """Outcome of the center iteration; ``residual = |T(x)| / D(x)``."""

    point: np.ndarray
    residual: float
    iterations: int
    converged: bool


def _moment(quad: _Quadrature, gap: BallGapFunctions, x):
    d = quad.points - x
    r = np.hypot(d[:, 0], d[:, 1])
    g, g_over_r, _, _, q = gap.evaluate(r)
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = np.where(r[:, None] > 0, d / r[:, None], 0.0)
    w = quad.weights * quad.psi2
    T = (w * g) @ unit
    D = float(np.dot(w, g_over_r * (q + DIM - 1))) / DIM
    return T, D


def center_fixed_point(pair: SpectralPair, gap: BallGapFunctions, x0=None, omega: float = 0.5,
                       tol: float = 1e-9, max_iter: int = 500) -> CenterResult:
    """Point ``x`` with ``∫ g(|y - x|) (y - x)/|y - x| ψ_1(y)² dy = 0``.

    The moment ``T(x)`` has Jacobian close to ``-D(x) I`` with
    ``D = ∫ (g/r)(q + n - 1)/n ψ_1²``, so the damped update is
    ``x <- x + ω T(x)/D(x)``.  It stops when ``|T|/D < tol·diam``.
    Non-convergence is reported through ``converged``, not raised.
    """
    quad = _quadrature(pair)
    if pair.domain is not None:
        diam = pair.domain.diameter
        start = np.array(pair.domain.centroid, dtype=float)
    else:
        nodes = pair.mesh.nodes
        diam = float(np.max(np.ptp(nodes, axis=0)) * math.sqrt(2))
        start = nodes.mean(axis=0)
    x = start if x0 is None else np.asarray(x0, dtype=float).copy()
    best = (math.inf, x)
    for it in range(1, max_iter + 1):
        T, D = _moment(quad, gap, x)
        step = T / D
        res = float(np.hypot(*step))
        if res < best[0]:
            best = (res, x.copy())
        if res < tol * diam:
            return CenterResult(x, res, it, True)
        x = x + omega * step
    return CenterResult(best[1], best[0], max_iter, False)


_QUAD_CACHE: dict[int, tuple] = {}


def _quadrature(pair: SpectralPair) -> _Quadrature:
    hit = _QUAD_CACHE.get(id(pair))
    if hit is None or hit[0] is not pair:
        if len(_QUAD_CACHE) > 8:
            _QUAD_CACHE.clear()
        hit = (pair, _Quadrature(pair))
        _QUAD_CACHE[id(pair)] = hit
    return hit[1]


def faber_krahn_robin(domain: PolygonDomain, beta: float, h: float) -> InequalityReport:
    """``λ_1(Ω*, β) <= λ_1(Ω, β)``; ``β = inf`` gives the Dirichlet version."""
    beta = float(beta)
    if not beta > 0:
        raise DomainError("β must be positive")
    case = case_data(domain, beta, float(h))
    lam_ball = case.radii.lambda1_ball
    lam = case.pair.lambda1
    return make_report("eq12.6", lam_ball, lam, _slack(h, domain.m, lam),
                       **case.context(r_star=case.radii.r_star))


def theorem11_bound(domain: PolygonDomain, beta: float, h: float,
                    estimate_rm_error: bool = True) -> InequalityReport:
    """Ratio bound ``λ_2/λ_1 <= (R_λ²/R²)(λ_2*/λ_1* - 1) + 1``.

    The starred eigenvalues belong to ``Ω*`` with the same ``β``.  The
    context carries the radii, the flag ``r_m >= r_lambda`` (when the bound
    reduces to the ball ratio) and ``r_m_error``, the change of ``R_M`` under
    one coarsening of the mesh.
    """
    beta = float(beta)
    if not beta > 0:
        raise DomainError("β must be positive")
    case = case_data(domain, beta, float(h))
    rad = case.radii
    ball_ratio = case.lambda2_star / case.lambda1_star
    k = (rad.r_lambda / rad.r) ** 2
    rhs = k * ball_ratio - k + 1.0
    lhs = case.pair.ratio
    rm_err = float("nan")
    if estimate_rm_error:
        coarse = robin_spectrum(domain, beta, 2 * float(h))
        rm_err = abs(radii(coarse, domain, beta).r_m - rad.r_m)
    ctx = case.context(r_star=rad.r_star, r_lambda=rad.r_lambda, r_m=rad.r_m, r=rad.r,
                       r_m_error=rm_err, ball_ratio=ball_ratio,
                       rm_exceeds_rlambda=bool(rad.r_m >= rad.r_lambda))
    return make_report("thm1.1", lhs, rhs, _slack(h, domain.m, rhs), **ctx)


def rm_lower_bound(domain: PolygonDomain, beta: float, h: float) -> InequalityReport:
    """Lower bound for ``R_M`` on convex domains from the Dirichlet ``λ_1``.

    Raises
    ------
    ConvexityError
        If the domain is not convex.
    """
    if not domain.convex:
        raise ConvexityError(f"{domain.name} is not convex")
    beta = float(beta)
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError("β must be positive and finite")
    n = DIM
    lam_d = robin_spectrum(domain, math.inf, float(h)).lambda1
    a = (2.0 / n) * lam_d
    lhs = math.sqrt((2 * n / lam_d) * (1 - math.sqrt(a / (beta ** 2 + a))))
    case = case_data(domain, beta, float(h))
    rhs = case.radii.r_m
    return make_report("eq1.8.1", lhs, rhs, _slack(h, domain.m, rhs),
                       **case.context(lambda1_dirichlet=lam_d))


def reverse_holder(domain: PolygonDomain, beta: float, p: float, q: float,
                   h: float) -> InequalityReport:
    """``‖ψ_1‖_q / ‖ψ_1‖_p <= K`` with ``K`` the same ratio for ``z_1`` on ``B_R``."""
    if not (0 < p <= q):
        raise DomainError("need q >= p > 0")
    beta = float(beta)
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError("β must be positive and finite")
    case = case_data(domain, beta, float(h))
    profile = psi_profile(domain, beta, float(h))
    lhs = lp_norm_profile(profile, q) / lp_norm_profile(profile, p)
    rhs = lp_norm_radial(case.z1, q) / lp_norm_radial(case.z1, p)
    return make_report("thm1.6", lhs, rhs, _slack(h, domain.m, rhs),
                       **case.context(p=float(p), q=float(q)))


def _assert_monotone(gap: BallGapFunctions, n_grid: int = 1000) -> None:
    r = np.linspace(0.0, gap.radius, n_grid)
    g, _, _, eta, _ = gap.evaluate(r)
    scale_g = max(1.0, float(np.max(np.abs(g))))
    scale_e = max(1.0, float(np.max(np.abs(eta))))
    if np.any(np.diff(g) < -MONOTONE_TOL * scale_g):
        raise RobinSpecError("g is not nondecreasing on [0, R]")
    if np.any(np.diff(eta) > MONOTONE_TOL * scale_e):
        raise RobinSpecError("η is not nonincreasing on [0, R]")


def gap_bound_general(domain: PolygonDomain, beta: float, h: float) -> list[InequalityReport]:
    """Gap bound through the center-shifted trial functions, and its ball endpoint.

    Returns two reports: ``λ_2 - λ_1 <= ∫η ψ_1² / ∫g² ψ_1²`` (``lemmaA.2``)
    and ``λ_2 - λ_1 <= λ_2(B_R) - λ_1(B_R)`` (``eq4.1``), both with the
    coefficient ``(R*/R)β`` on ``B_R``.
    """
    beta = float(beta)
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError("β must be positive and finite")
    case = case_data(domain, beta, float(h))
    gap = gap_functions(DIM, case.R, case.beta_eff)
    _assert_monotone(gap)
    center = center_fixed_point(case.pair, gap)
    quad = _quadrature(case.pair)
    d = quad.points - center.point
    g, _, _, eta, _ = gap.evaluate(np.hypot(d[:, 0], d[:, 1]))
    rhs = quad.integral(eta) / quad.integral(g * g)
    lhs = case.pair.lambda2 - case.pair.lambda1
    ctx = case.context(center_x=float(center.point[0]), center_y=float(center.point[1]),
                       center_residual=center.residual, center_converged=center.converged,
                       beta_eff=case.beta_eff)
    return [
        make_report("lemmaA.2", lhs, rhs, _slack(h, domain.m, rhs), **ctx),
        make_report("eq4.1", lhs, gap.gap, _slack(h, domain.m, gap.gap), **ctx),
    ]


def classical_checks(domain: PolygonDomain, h: float) -> list[InequalityReport]:
    """Szegő–Weinberger, Payne–Rayner, Payne–Schaefer and the small-β comparison.

    Payne–Schaefer is evaluated at ``β = 2 p0 λ_1^D(Ω)``, which satisfies its
    hypothesis ``β > p0 λ_1^D``.  The small-β comparison is skipped on disks.
    """
    h = float(h)
    m = domain.m
    r_star = math.sqrt(domain.area / unit_ball_volume(DIM))
    out = []

    neumann = robin_spectrum(domain, 0.0, h)
    mu_ball = second_eigenvalue_check(DIM, r_star, 0.0)[0]
    out.append(make_report("eq1.30.1", neumann.lambda2, mu_ball, _slack(h, m, mu_ball),
                           **base_context(domain, 0.0, h, r_star=r_star)))

    dirichlet = robin_spectrum(domain, math.inf, h)
    phi = dirichlet.psi1
    _, M, _ = dirichlet.operators()
    l2 = float(phi @ (M @ phi))
    l1 = float(np.sum(M @ phi))
    pr_rhs = dirichlet.lambda1 / (4 * math.pi) * l1 ** 2
    out.append(make_report("eq1.4", l2, pr_rhs, _slack(h, m, pr_rhs),
                           **base_context(domain, math.inf, h)))

    beta_ps = 2.0 * domain.p0 * dirichlet.lambda1
    ps = robin_spectrum(domain, beta_ps, h)
    out.append(make_report("eq12.7", ps.ratio, PAYNE_SCHAEFER_BOUND,
                           _slack(h, m, PAYNE_SCHAEFER_BOUND),
                           **base_context(domain, beta_ps, h, p0=domain.p0,
                                          lambda1_dirichlet=dirichlet.lambda1)))

    if not is_ball(domain):
        small = robin_spectrum(domain, SMALL_BETA, h)
        lam2_ball = second_eigenvalue_check(DIM, r_star, SMALL_BETA)[0]
        out.append(make_report("eq12.3", small.lambda2, lam2_ball, _slack(h, m, lam2_ball),
                               **base_context(domain, SMALL_BETA, h, r_star=r_star)))
    return out

