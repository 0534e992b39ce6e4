"""Shared per-case data: FEM pair, radii and the comparison ball ``B_R``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from ..ballspec import RadialMode, robin_eigenvalue_ball, second_eigenvalue_check
from ..errors import DomainError
from ..femspec import PolygonDomain, RadiiReport, SpectralPair, radii, robin_spectrum
from ..rearrange import Profile, decreasing_rearrangement, distribution
from .reports import slack_fraction

DIM = 2


@dataclass(frozen=True)
class CaseData:
    """Everything the inequality checks need for one ``(domain, β, h)``.

    ``beta_eff`` is the coefficient ``(R*/R)β`` used on ``B_R``; in the
    Dirichlet case it stays infinite.
    """

    domain: PolygonDomain = field(repr=False)
    beta: float
    h: float
    pair: SpectralPair = field(repr=False)
    radii: RadiiReport
    beta_eff: float
    z1: RadialMode
    lambda1_star: float
    lambda2_star: float

    @property
    def R(self) -> float:
        return self.radii.r

    @property
    def slack_rel(self) -> float:
        return slack_fraction(self.h, self.domain.m)

    def context(self, **extra) -> dict:
        ctx = {"domain": self.domain.name, "beta": self.beta, "h": self.h, "m": self.domain.m}
        if self.pair.clipped:
            ctx["psi_clipped"] = self.pair.clipped
        ctx.update(extra)
        return ctx


def base_context(domain: PolygonDomain, beta: float, h: float, **extra) -> dict:
    ctx = {"domain": domain.name, "beta": float(beta), "h": float(h), "m": domain.m}
    ctx.update(extra)
    return ctx


@lru_cache(maxsize=64)
def case_data(domain: PolygonDomain, beta: float, h: float) -> CaseData:
    beta = float(beta)
    if not beta > 0:
        raise DomainError("the comparison ball needs β > 0")
    pair = robin_spectrum(domain, beta, h)
    rad = radii(pair, domain, beta)
    R = rad.r
    beta_eff = math.inf if math.isinf(beta) else rad.r_star / R * beta
    z1 = robin_eigenvalue_ball(DIM, R, beta_eff, 0, 1)
    lam1_star = robin_eigenvalue_ball(DIM, rad.r_star, beta, 0, 1).eigenvalue
    lam2_star = second_eigenvalue_check(DIM, rad.r_star, beta)[0]
    return CaseData(domain, beta, float(h), pair, rad, beta_eff, z1, lam1_star, lam2_star)


@lru_cache(maxsize=64)
def psi_profile(domain: PolygonDomain, beta: float, h: float) -> Profile:
    """Decreasing rearrangement of the sup-normalized ``ψ_1``."""
    return decreasing_rearrangement(distribution(case_data(domain, beta, h).pair))


@lru_cache(maxsize=64)
def z_profile(domain: PolygonDomain, beta: float, h: float) -> Profile:
    """Decreasing rearrangement of ``z_1`` on ``B_R``."""
    return decreasing_rearrangement(distribution(case_data(domain, beta, h).z1))
