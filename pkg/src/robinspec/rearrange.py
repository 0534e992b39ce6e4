"""Distribution functions and decreasing rearrangements.

Mesh functions are continuous and piecewise linear, so their distribution
function ``μ(t) = |{f > t}|`` is C¹ and piecewise quadratic between
consecutive nodal values (plus jumps where ``f`` is constant on whole
triangles).  It is evaluated exactly at the nodal levels and midpoints and
stored as one quadratic per level interval, which makes both ``μ`` and its
generalized inverse ``f*`` exact up to rounding.  ``Profile`` is the
piecewise-linear sampling of ``f*`` that downstream quadrature works with.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .ballspec import RadialMode, radial_eigenfunction, unit_ball_volume
from .errors import DomainError, MeshError

__all__ = [
    "MeshDistribution",
    "RadialDistribution",
    "ComposedDistribution",
    "Profile",
    "RadialFunction",
    "HardyLittlewoodReport",
    "TransferReport",
    "distribution",
    "decreasing_rearrangement",
    "schwarz",
    "lp_norm_profile",
    "hardy_littlewood_check",
    "transfer_check",
    "mesh_power_integral",
    "mesh_inner_product",
    "hybrid_grid",
]

DEFAULT_GRID = 2048
_PAIR_CHUNK = 4_000_000


def hybrid_grid(total: float, n: int = DEFAULT_GRID) -> np.ndarray:
    """Geometric-plus-uniform points on ``[0, total]``, denser near 0."""
    if not total > 0:
        return np.array([0.0])
    n_geo = n // 2
    geo = total * np.geomspace(1e-9, 1.0, n_geo)
    uni = np.linspace(0.0, total, n - n_geo)
    return np.unique(np.concatenate([[0.0], geo, uni, [total]]))


def _homogeneous(v0, v1, v2, k):
    """Complete homogeneous symmetric polynomial of degree ``k`` in three variables."""
    out = np.zeros_like(v0)
    for i in range(k + 1):
        for j in range(k + 1 - i):
            out += v0 ** i * v1 ** j * v2 ** (k - i - j)
    return out


def mesh_power_integral(mesh, values, k: int) -> float:
    """Exact ``∫ f^k`` for a P1 function and integer ``k >= 0``.

    Uses ``∫_T f^k = 2|T| k!/(k+2)! h_k(f_0, f_1, f_2)``.
    """
    if int(k) != k or k < 0:
        raise DomainError("k must be a nonnegative integer")
    v = np.asarray(values, dtype=float)[mesh.triangles]
    h = _homogeneous(v[:, 0], v[:, 1], v[:, 2], int(k))
    return float(np.sum(2 * mesh.areas * h) * math.factorial(k) / math.factorial(k + 2))


def mesh_inner_product(mesh, f, g) -> float:
    """Exact ``∫ f g`` for two P1 functions."""
    f = np.asarray(f, dtype=float)[mesh.triangles]
    g = np.asarray(g, dtype=float)[mesh.triangles]
    return float(np.sum(mesh.areas * ((f * g).sum(1) + f.sum(1) * g.sum(1)) / 12.0))


def _solve_piece(a, b, c, s):
    """Root ``u`` in ``[0, 1]`` of ``a + b u + c u² = s`` for a decreasing quadratic."""
    d = a - s
    disc = np.maximum(b * b - 4 * c * d, 0.0)
    q = 0.5 * (-b + np.sqrt(disc))
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(q > 0, d / q, 0.0)
    return np.clip(u, 0.0, 1.0)


class _Inverse:
    """``f*(s) = inf{t : μ(t) < s}`` by bisection on ``t`` (vectorized)."""

    def inverse(self, s):
        s = np.asarray(s, dtype=float)
        lo = np.full(s.shape, self.ess_inf)
        hi = np.full(s.shape, self.ess_sup)
        # invariant: μ(lo) >= s > μ(hi) or lo == hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if np.all((mid == lo) | (mid == hi)):
                break
            below = self(mid) < s
            hi = np.where(below, mid, hi)
            lo = np.where(below, lo, mid)
        out = np.where(self(lo) < s, lo, hi)
        out = np.where(s <= 0, self.ess_sup, out)
        out = np.where(s > self.total_measure, 0.0, out)
        return out

    def natural_breakpoints(self):
        return np.empty(0), np.empty(0)


@dataclass(frozen=True, eq=False)
class MeshDistribution:
    """Exact distribution function of a nonnegative P1 function.

    ``levels`` are the distinct nodal values; on ``[L_k, L_{k+1})``,
    ``μ = a_k + b_k u + c_k u²`` with ``u = (t - L_k)/(L_{k+1} - L_k)``.
    """

    levels: np.ndarray = field(repr=False)
    mu_right: np.ndarray = field(repr=False)
    mu_left: np.ndarray = field(repr=False)
    coef: np.ndarray = field(repr=False)
    total_measure: float

    @classmethod
    def from_mesh(cls, mesh, values) -> "MeshDistribution":
        values = np.asarray(values, dtype=float)
        if values.shape != (mesh.n_nodes,):
            raise MeshError("nodal values do not match the mesh")
        if np.any(values < 0):
            raise DomainError("distribution needs a nonnegative function")
        tv = np.sort(values[mesh.triangles], axis=1)
        area = mesh.areas
        levels = np.unique(tv)
        mids = 0.5 * (levels[:-1] + levels[1:])
        pts = np.concatenate([levels, mids])
        order = np.argsort(pts, kind="stable")
        t = pts[order]
        mu_t = _stab(tv, area, t)
        mu_at = np.empty_like(mu_t)
        mu_at[order] = mu_t
        mu_r = np.minimum.accumulate(mu_at[: len(levels)])
        mu_m = np.clip(mu_at[len(levels):], mu_r[1:], mu_r[:-1])
        flat = tv[:, 0] == tv[:, 2]
        jump = np.zeros(len(levels))
        if np.any(flat):
            idx = np.searchsorted(levels, tv[flat, 0])
            jump = np.bincount(idx, weights=area[flat], minlength=len(levels))
        total = float(area.sum())
        mu_l = np.minimum(mu_r + jump, total)
        mu_l[0] = total
        a = mu_r[:-1]
        m = mu_m
        e = mu_l[1:]
        coef = np.column_stack([a, -3 * a + 4 * m - e, 2 * a - 4 * m + 2 * e])
        return cls(levels, mu_r, mu_l, coef, total)

    @property
    def ess_sup(self) -> float:
        return float(self.levels[-1])

    @property
    def ess_inf(self) -> float:
        return float(self.levels[0])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        L = self.levels
        k = np.searchsorted(L, t, side="right") - 1
        out = np.where(t < L[0], self.total_measure, 0.0)
        inside = (k >= 0) & (k < len(L) - 1)
        if np.any(inside):
            kk = k[inside]
            u = (t[inside] - L[kk]) / (L[kk + 1] - L[kk])
            a, b, c = self.coef[kk].T
            out = out.copy() if out.ndim else np.array(out)
            out[inside] = a + u * (b + u * c)
        return float(out) if out.ndim == 0 else out

    def inverse(self, s):
        """Exact ``f*(s)`` from the piecewise quadratics."""
        s = np.asarray(s, dtype=float)
        L, mu_r, mu_l = self.levels, self.mu_right, self.mu_left
        K = len(L)
        # count = #{k : μ(L_k) >= s}; μ(L_k) is nonincreasing in k
        count = K - np.searchsorted(mu_r[::-1], s, side="left")
        out = np.full(s.shape, L[0])
        kstar = count - 1
        has = kstar >= 0
        nxt = np.minimum(kstar + 1, K - 1)
        in_jump = has & (kstar + 1 <= K - 1) & (s <= mu_l[nxt])
        out = np.where(in_jump, L[nxt], out)
        piece = has & ~in_jump & (kstar < K - 1)
        if np.any(piece):
            kk = kstar[piece]
            a, b, c = self.coef[kk].T
            u = _solve_piece(a, b, c, s[piece])
            out[piece] = L[kk] + u * (L[kk + 1] - L[kk])
        top = has & (kstar == K - 1)
        out = np.where(top, L[-1], out)
        out = np.where(s <= 0, L[-1], out)
        out = np.where(s > self.total_measure, 0.0, out)
        return float(out) if out.ndim == 0 else out

    def natural_breakpoints(self, tol: float | None = None, max_points: int = 2_000_000):
        """``(s, f*(s))`` samples at every level, jump and adaptive interior point.

        Interior points are added until the area between each quadratic
        piece and its chords is below ``tol`` per piece in total.
        """
        L = self.levels
        K = len(L)
        if K == 1:
            return np.array([0.0, self.total_measure]), np.array([L[0], L[0]])
        span = L[-1] - L[0]
        if tol is None:
            tol = 1e-11 * self.total_measure * max(span, L[-1])
        per_piece = tol / (K - 1)
        widths = np.diff(L)
        c = np.abs(self.coef[:, 2])
        ksub = np.ceil(np.sqrt(c * widths / (6 * per_piece))).astype(np.int64)
        ksub = np.clip(ksub, 1, None)
        budget = max_points - 2 * K
        if ksub.sum() > budget:
            ksub = np.clip(np.ceil(ksub * budget / ksub.sum()).astype(np.int64), 1, None)
        piece = np.repeat(np.arange(K - 1), ksub)
        start = np.cumsum(ksub) - ksub
        j = np.arange(ksub.sum()) - start[piece]
        u = j / ksub[piece]
        a, b, cc = self.coef[piece].T
        s_int = a + u * (b + u * cc)
        v_int = L[piece] + u * widths[piece]
        s = np.concatenate([self.mu_left, self.mu_right, s_int])
        v = np.concatenate([L, L, v_int])
        return s, v


def _stab(tv, area, t):
    """``μ(t)`` at sorted ``t`` for triangles with sorted vertex values ``tv``."""
    v0, v1, v2 = tv[:, 0], tv[:, 1], tv[:, 2]
    order = np.argsort(v0, kind="stable")
    v0s = v0[order]
    suffix = np.concatenate([np.cumsum(area[order][::-1])[::-1], [0.0]])
    mu = suffix[np.searchsorted(v0s, t, side="right")]
    lo = np.searchsorted(t, v0, side="left")
    hi = np.searchsorted(t, v2, side="left")
    counts = hi - lo
    active = np.nonzero(counts > 0)[0]
    if active.size == 0:
        return mu
    cum = np.cumsum(counts[active])
    start = 0
    while start < active.size:
        base = cum[start - 1] if start else 0
        stop = int(np.searchsorted(cum, base + _PAIR_CHUNK, side="right"))
        stop = max(stop, start + 1)
        tri = active[start:stop]
        cnt = counts[tri]
        rep = np.repeat(np.arange(tri.size), cnt)
        offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        ti = lo[tri][rep] + offs
        tt = t[ti]
        a, b, c = v0[tri][rep], v1[tri][rep], v2[tri][rep]
        A = area[tri][rep]
        with np.errstate(divide="ignore", invalid="ignore"):
            low = A * (1 - (tt - a) ** 2 / ((b - a) * (c - a)))
            high = A * (c - tt) ** 2 / ((c - a) * (c - b))
        contrib = np.where(tt < b, low, high)
        mu += np.bincount(ti, weights=contrib, minlength=len(t))
        start = stop
    return mu


@dataclass(frozen=True, eq=False)
class RadialDistribution(_Inverse):
    """Distribution of a radial nonincreasing function ``f(|x|)`` on ``B_R``."""

    func: Callable = field(repr=False)
    radius: float
    dim: int
    sup_value: float | None = None

    @property
    def total_measure(self) -> float:
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    @property
    def ess_sup(self) -> float:
        if self.sup_value is not None:
            return float(self.sup_value)
        return float(self.func(np.array([0.0]))[0])

    @property
    def ess_inf(self) -> float:
        return float(self.func(np.array([self.radius]))[0])

    def _radius_above(self, t):
        """``sup{r : f(r) > t}`` by bisection in ``r``."""
        t = np.asarray(t, dtype=float)
        lo = np.zeros(t.shape)
        hi = np.full(t.shape, self.radius)
        above_all = self.func(hi) > t
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            up = self.func(mid) > t
            lo = np.where(up, mid, lo)
            hi = np.where(up, hi, mid)
        r = np.where(above_all, self.radius, lo)
        return np.where(self.func(np.zeros(t.shape)) > t, r, 0.0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = unit_ball_volume(self.dim) * self._radius_above(np.atleast_1d(t)) ** self.dim
        return float(out[0]) if t.ndim == 0 else out

    def inverse(self, s):
        """``f((s/ω_n)^{1/n})`` since ``f`` is nonincreasing in ``r``."""
        s = np.asarray(s, dtype=float)
        r = np.clip((np.clip(s, 0, None) / unit_ball_volume(self.dim)) ** (1 / self.dim),
                    0, self.radius)
        out = np.asarray(self.func(np.atleast_1d(r)), dtype=float).reshape(s.shape)
        out = np.where(s > self.total_measure, 0.0, out)
        return float(out) if out.ndim == 0 else out

    def natural_breakpoints(self):
        return np.empty(0), np.empty(0)


@dataclass(frozen=True, eq=False)
class ComposedDistribution(_Inverse):
    """Distribution of ``ψ∘f`` for a nondecreasing ``ψ``.

    ``{ψ(f) > t} = {f > ψ⁺(t)}`` with ``ψ⁺(t) = sup{x : ψ(x) <= t}`` the
    upper generalized inverse, so ``μ_{ψ∘f}(t) = μ_f(ψ⁺(t))``.
    """

    base: object = field(repr=False)
    psi: Callable = field(repr=False)
    psi_upper_inverse: Callable = field(repr=False)

    @property
    def total_measure(self) -> float:
        return self.base.total_measure

    @property
    def ess_sup(self) -> float:
        return float(self.psi(np.array(self.base.ess_sup)))

    @property
    def ess_inf(self) -> float:
        return float(self.psi(np.array(self.base.ess_inf)))

    def __call__(self, t):
        x = np.asarray(self.psi_upper_inverse(np.asarray(t, dtype=float)), dtype=float)
        out = np.where(np.isinf(x) & (x > 0), 0.0, self.base(np.where(np.isfinite(x), x, 0.0)))
        out = np.where(np.isinf(x) & (x < 0), self.total_measure, out)
        return float(out) if out.ndim == 0 else out


def distribution(obj, values=None):
    """Distribution function of a mesh function or a radial mode.

    Parameters
    ----------
    obj : SpectralPair, Mesh, RadialMode or RadialFunction
        For a ``Mesh``, ``values`` gives the nodal values; for a
        ``SpectralPair`` the default is ``psi1``.
    """
    if isinstance(obj, RadialMode):
        mode = obj
        if mode.ell != 0:
            raise DomainError("only ℓ = 0 modes are nonincreasing")
        return RadialDistribution(lambda r: np.asarray(radial_eigenfunction(mode, r)),
                                  mode.radius, mode.dim, sup_value=mode.norm)
    if isinstance(obj, RadialFunction):
        return RadialDistribution(obj, obj.radius, obj.dim)
    if hasattr(obj, "psi1") and hasattr(obj, "mesh"):
        return MeshDistribution.from_mesh(obj.mesh, obj.psi1 if values is None else values)
    if hasattr(obj, "triangles"):
        if values is None:
            raise DomainError("nodal values required for a bare mesh")
        return MeshDistribution.from_mesh(obj, values)
    raise TypeError(f"cannot build a distribution from {type(obj).__name__}")


@dataclass(frozen=True)
class Profile:
    """Piecewise-linear decreasing rearrangement ``f*`` sampled at breakpoints."""

    s: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    total_measure: float

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if s.shape != v.shape or s.ndim != 1 or s.size < 2:
            raise DomainError("profile needs matching 1-D breakpoint arrays")
        if s[0] != 0 or np.any(np.diff(s) <= 0) or abs(s[-1] - self.total_measure) > 1e-12 * max(
                1.0, self.total_measure):
            raise DomainError("profile s must increase strictly from 0 to the total measure")
        if np.any(np.diff(v) > 0) or np.any(v < 0):
            raise DomainError("profile values must be nonnegative and nonincreasing")
        s.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "values", v)

    @property
    def breakpoints(self):
        return list(zip(self.s.tolist(), self.values.tolist()))

    @property
    def sup(self) -> float:
        return float(self.values[0])

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.interp(s, self.s, self.values)
        out = np.where(s >= self.total_measure, 0.0, out)
        # keep the left limit at the right end point of the support
        out = np.where(s == self.total_measure, self.values[-1], out)
        return float(out) if out.ndim == 0 else out

    def increasing(self) -> "Profile":
        """Increasing rearrangement ``f_*(s) = f*(|Ω| - s)`` (as a reflected profile)."""
        return _Reflected(self)

    def measure_above(self, t):
        """``|{s : f*(s) > t}|``, the distribution of the profile itself."""
        t = np.asarray(t, dtype=float)
        v, s = self.values[::-1], self.s[::-1]  # ascending values, descending s
        n = len(v)
        k = np.searchsorted(v, t, side="right")
        kk = np.clip(k, 1, n - 1)
        va, vb, sa, sb = v[kk - 1], v[kk], s[kk - 1], s[kk]
        with np.errstate(divide="ignore", invalid="ignore"):
            cross = sb + (sa - sb) * (vb - t) / (vb - va)
        out = np.where(k >= n, 0.0, np.where(k == 0, self.total_measure, cross))
        return float(out) if out.ndim == 0 else out

    def power_integrals(self, p: float) -> np.ndarray:
        """Exact ``∫ f*^p`` over each linear piece."""
        va, vb = self.values[:-1], self.values[1:]
        ds = np.diff(self.s)
        m = 0.5 * (va + vb)
        rel = np.abs(vb - va) <= 1e-4 * np.maximum(m, 1e-300)
        with np.errstate(divide="ignore", invalid="ignore"):
            exact = ds * (va ** (p + 1) - vb ** (p + 1)) / ((p + 1) * (va - vb))
        simpson = ds * (va ** p + 4 * m ** p + vb ** p) / 6
        return np.where(rel, simpson, exact)

    def cumulative(self, p: float, s_query=None) -> np.ndarray:
        """``∫_0^s f*^p`` at the breakpoints or at ``s_query``."""
        cum = np.concatenate([[0.0], np.cumsum(self.power_integrals(p))])
        if s_query is None:
            return cum
        sq = np.clip(np.asarray(s_query, dtype=float), 0, self.total_measure)
        k = np.clip(np.searchsorted(self.s, sq, side="right") - 1, 0, len(self.s) - 2)
        va = self.values[k]
        vq = np.interp(sq, self.s, self.values)
        part = Profile._segment_power(va, vq, sq - self.s[k], p)
        return cum[k] + part

    @staticmethod
    def _segment_power(va, vb, ds, p):
        m = 0.5 * (va + vb)
        rel = np.abs(vb - va) <= 1e-4 * np.maximum(m, 1e-300)
        with np.errstate(divide="ignore", invalid="ignore"):
            exact = ds * (va ** (p + 1) - vb ** (p + 1)) / ((p + 1) * (va - vb))
        return np.where(rel, ds * (va ** p + 4 * m ** p + vb ** p) / 6, exact)

    def scaled(self, c: float) -> "Profile":
        return Profile(self.s, self.values * float(c), self.total_measure)

    def to_csv(self, path_or_buf=None) -> str:
        """CSV ``s,value`` with 17 significant digits."""
        buf = io.StringIO()
        buf.write("s,value\n")
        for s, v in zip(self.s, self.values):
            buf.write(f"{s:.17g},{v:.17g}\n")
        text = buf.getvalue()
        if path_or_buf is not None:
            if hasattr(path_or_buf, "write"):
                path_or_buf.write(text)
            else:
                Path(path_or_buf).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path_or_buf) -> "Profile":
        text = path_or_buf.read() if hasattr(path_or_buf, "read") else Path(path_or_buf).read_text()
        lines = text.strip().splitlines()
        if lines[0].strip() != "s,value":
            raise DomainError("profile CSV must start with the header 's,value'")
        data = np.array([list(map(float, ln.split(","))) for ln in lines[1:]])
        return cls(data[:, 0], data[:, 1], float(data[-1, 0]))


class _Reflected:
    """Increasing rearrangement view of a profile."""

    def __init__(self, profile: Profile):
        self.profile = profile
        self.total_measure = profile.total_measure
        self.s = (profile.total_measure - profile.s[::-1]).copy()
        self.s[0] = 0.0
        self.values = profile.values[::-1]

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = self.profile(self.total_measure - s)
        out = np.where((s < 0) | (s > self.total_measure), 0.0, out)
        return float(out) if out.ndim == 0 else out


def decreasing_rearrangement(mu, n_grid: int = DEFAULT_GRID, grid=None) -> Profile:
    """Profile of ``f*(s) = inf{t : μ(t) < s}``.

    Parameters
    ----------
    mu : distribution object
        Anything returned by :func:`distribution`.
    n_grid : int
        Size of the default hybrid ``s``-grid merged into the breakpoints.
    grid : array_like, optional
        Extra ``s`` samples.
    """
    total = float(mu.total_measure)
    s_grid = hybrid_grid(total, n_grid)
    if grid is not None:
        g = np.asarray(grid, dtype=float)
        s_grid = np.concatenate([s_grid, g[(g >= 0) & (g <= total)]])
    s_nat, v_nat = mu.natural_breakpoints()
    v_grid = np.asarray(mu.inverse(s_grid), dtype=float)
    # s = total sits on the support; its value is the left limit ess inf
    v_grid = np.where(s_grid >= total, mu.ess_inf, v_grid)
    v_grid = np.where(s_grid <= 0, mu.ess_sup, v_grid)
    s = np.concatenate([s_nat, s_grid])
    v = np.concatenate([v_nat, v_grid])
    keep = (s >= 0) & (s <= total)
    s, v = s[keep], v[keep]
    order = np.lexsort((-v, s))
    s, v = s[order], v[order]
    first = np.concatenate([[True], np.diff(s) > 0])
    s, v = s[first], v[first]
    v = np.minimum.accumulate(np.maximum(v, 0.0))
    s[0] = 0.0
    s[-1] = total
    return Profile(s, v, total)


@dataclass(frozen=True)
class RadialFunction:
    """Schwarz symmetrization ``f⋆(x) = f*(ω_n |x|^n)`` on ``B_{R*}``."""

    profile: Profile = field(repr=False)
    dim: int

    @property
    def radius(self) -> float:
        return (self.profile.total_measure / unit_ball_volume(self.dim)) ** (1 / self.dim)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.profile(unit_ball_volume(self.dim) * np.abs(r) ** self.dim)


def schwarz(profile: Profile, n: int) -> RadialFunction:
    """Radial function on the ball of measure ``profile.total_measure``."""
    if int(n) != n or n < 1:
        raise DomainError("dimension must be a positive integer")
    return RadialFunction(profile, int(n))


def lp_norm_profile(profile: Profile, p: float) -> float:
    """``(∫_0^{|Ω|} f*(s)^p ds)^{1/p}``, exact for the piecewise-linear profile."""
    if not p > 0:
        raise DomainError("p must be positive")
    return float(profile.power_integrals(p).sum()) ** (1.0 / p)


def _pl(fun, s):
    """Piecewise-linear value inside ``[0, total]`` without end-point conventions."""
    if isinstance(fun, _Reflected):
        prof = fun.profile
        return np.interp(fun.total_measure - s, prof.s, prof.values)
    return np.interp(s, fun.s, fun.values)


def _product_integral(f, g, total):
    """``∫_0^total f g`` for piecewise-linear factors; Simpson is exact per piece."""
    s = np.unique(np.concatenate([f.s, g.s]))
    s = s[(s >= 0) & (s <= total)]
    a, b = s[:-1], s[1:]
    m = 0.5 * (a + b)
    fa, fm, fb = _pl(f, a), _pl(f, m), _pl(f, b)
    ga, gm, gb = _pl(g, a), _pl(g, m), _pl(g, b)
    return float(np.sum((b - a) * (fa * ga + 4 * fm * gm + fb * gb) / 6))


@dataclass(frozen=True)
class HardyLittlewoodReport:
    lower: float
    middle: float
    upper: float
    tolerance: float

    @property
    def holds(self) -> bool:
        return (self.lower <= self.middle + self.tolerance
                and self.middle <= self.upper + self.tolerance)


def hardy_littlewood_check(mesh, f, g, rtol: float = 1e-8,
                           n_grid: int = DEFAULT_GRID) -> HardyLittlewoodReport:
    """``∫ f* g_* <= ∫ f g <= ∫ f* g*`` for two nonnegative P1 functions."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != (mesh.n_nodes,) or g.shape != (mesh.n_nodes,):
        raise MeshError("both functions must live on the given mesh")
    pf = decreasing_rearrangement(MeshDistribution.from_mesh(mesh, f), n_grid)
    pg = decreasing_rearrangement(MeshDistribution.from_mesh(mesh, g), n_grid)
    total = pf.total_measure
    upper = _product_integral(pf, pg, total)
    lower = _product_integral(pf, pg.increasing(), total)
    middle = mesh_inner_product(mesh, f, g)
    scale = max(abs(upper), abs(middle), 1e-300)
    return HardyLittlewoodReport(lower, middle, upper, rtol * scale)


@dataclass(frozen=True)
class TransferReport:
    alpha: float
    beta: float
    premise: bool
    lhs: float
    rhs: float
    holds: bool


def transfer_check(f: Profile, g: Profile, alpha: float, beta: float, T: float,
                   atol: float = 1e-9, grid=None) -> TransferReport:
    """Monotone-comparison transfer from exponent ``alpha`` to ``beta >= alpha``.

    If ``∫_0^s f*^α <= ∫_0^s g*^α`` on the grid for every ``s <= T`` then
    ``∫_0^T f*^β <= ∫_0^T g*^β + atol`` must follow.  The report holds when
    the premise fails or the conclusion holds.
    """
    if not 0 < alpha <= beta:
        raise DomainError("need 0 < alpha <= beta")
    s = np.unique(np.concatenate([f.s, g.s] if grid is None else [np.asarray(grid)]))
    s = s[(s >= 0) & (s <= T)]
    s = np.unique(np.concatenate([s, [T]]))
    cf, cg = f.cumulative(alpha, s), g.cumulative(alpha, s)
    premise = bool(np.all(cf <= cg + atol))
    lhs = float(f.cumulative(beta, [T])[0])
    rhs = float(g.cumulative(beta, [T])[0])
    return TransferReport(alpha, beta, premise, lhs, rhs, (not premise) or lhs <= rhs + atol)
