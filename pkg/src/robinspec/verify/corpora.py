"""Seeded function corpora for the rearrangement properties.

Each corpus is reproducible from its seed: the functions are random
combinations of linear and oscillating terms on a fixed square mesh, a
third of them quantized so that the distribution function has jumps.
"""

from __future__ import annotations

import numpy as np

from ..ballspec import robin_eigenvalue_ball, unit_ball_volume
from ..femspec import Mesh, make_domain, triangulate
from ..rearrange import (
    MeshDistribution,
    decreasing_rearrangement,
    distribution,
    hardy_littlewood_check,
    mesh_power_integral,
)
from .reports import InequalityReport, make_report

__all__ = [
    "corpus_mesh",
    "random_functions",
    "equimeasurability_reports",
    "radial_identity_reports",
    "hardy_littlewood_reports",
    "reflection_reports",
]

EQUIMEASURABLE_TOL = 1e-8
RADIAL_TOL = 1e-10


def corpus_mesh(h: float = 0.1) -> Mesh:
    return triangulate(make_domain("square"), h)


def random_functions(mesh: Mesh, count: int, seed: int) -> list[np.ndarray]:
    """``count`` nonnegative nodal vectors on ``mesh``, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    x, y = mesh.nodes[:, 0], mesh.nodes[:, 1]
    out = []
    for i in range(count):
        c = rng.normal(size=4)
        a, b, p, q = rng.uniform(1.0, 8.0, size=4)
        f = c[0] + c[1] * x + c[2] * y + c[3] * np.sin(a * x + p) * np.cos(b * y + q)
        f = f - f.min() + rng.uniform(0.0, 0.5)
        if i % 3 == 2:
            f = np.round(4 * f) / 4  # plateaus give jumps in μ
        out.append(f)
    return out


def _equimeasurability_error(mesh: Mesh, f: np.ndarray) -> float:
    mu = MeshDistribution.from_mesh(mesh, f)
    prof = decreasing_rearrangement(mu)
    total = mu.total_measure
    levels = np.unique(np.concatenate([f, np.linspace(f.min(), f.max(), 101)[1:-1]]))
    err = float(np.max(np.abs(np.asarray(mu(levels)) - prof.measure_above(levels)))) / total
    for k in (1, 2, 3):
        exact = mesh_power_integral(mesh, f, k)
        err = max(err, abs(float(prof.power_integrals(k).sum()) - exact) / exact)
    return err


def equimeasurability_reports(seed: int, count: int = 50, h: float = 0.1) -> list[InequalityReport]:
    """Distribution and ``∫ f^k`` (k = 1, 2, 3) of ``f`` against those of ``f*``."""
    mesh = corpus_mesh(h)
    return [make_report("prop2.3", _equimeasurability_error(mesh, f), EQUIMEASURABLE_TOL,
                        seed=seed, index=i, h=h)
            for i, f in enumerate(random_functions(mesh, count, seed))]


def radial_identity_reports(betas=(0.5, 1.0, 5.0, np.inf), dim: int = 2,
                            n_grid: int = 2048) -> list[InequalityReport]:
    """``f*(s) = f((s/ω_n)^{1/n})`` for radially nonincreasing ball modes.

    Also checks ``μ(f*(s)) = s`` at the interior breakpoints.
    """
    out = []
    for beta in betas:
        mode = robin_eigenvalue_ball(dim, 1.0, float(beta), 0, 1)
        mu = distribution(mode)
        prof = decreasing_rearrangement(mu, n_grid)
        r = np.minimum((prof.s / unit_ball_volume(dim)) ** (1.0 / dim), 1.0)
        err = float(np.max(np.abs(prof.values - mode(r)))) / mode.norm
        # μ itself comes from bisection in r, an independent route to the same set
        inner = slice(1, -1)
        err = max(err, float(np.max(np.abs(mu(prof.values[inner]) - prof.s[inner]))) / mu.total_measure)
        out.append(make_report("prop2.4", err, RADIAL_TOL, beta=float(beta), dim=dim))
    return out


def hardy_littlewood_reports(seed: int, count: int = 50, h: float = 0.1) -> list[InequalityReport]:
    """``∫ f* g_* <= ∫ f g <= ∫ f* g*`` on ``count`` seeded pairs.

    ``lhs`` is the larger of the two defects, so ``lhs <= 0`` when both hold.
    """
    mesh = corpus_mesh(h)
    funcs = random_functions(mesh, 2 * count, seed)
    out = []
    for i in range(count):
        rep = hardy_littlewood_check(mesh, funcs[2 * i], funcs[2 * i + 1])
        defect = max(rep.lower - rep.middle, rep.middle - rep.upper)
        out.append(make_report("prop2.6", defect, 0.0, rep.tolerance, seed=seed, index=i, h=h,
                               lower=rep.lower, middle=rep.middle, upper=rep.upper))
    return out


def reflection_reports(seed: int, count: int = 10, h: float = 0.1) -> list[InequalityReport]:
    """``f_*(s) = f*(|Ω| - s)`` at the breakpoints of the increasing rearrangement."""
    mesh = corpus_mesh(h)
    out = []
    for i, f in enumerate(random_functions(mesh, count, seed)):
        prof = decreasing_rearrangement(MeshDistribution.from_mesh(mesh, f))
        inc = prof.increasing()
        s = inc.s[1:-1]
        err = float(np.max(np.abs(inc(s) - prof(prof.total_measure - s))))
        out.append(make_report("reflection", err, 0.0, seed=seed, index=i, h=h))
    return out
