"""Exact Robin spectrum of balls via the radial secular equation.

Radial modes of ``-Δz = λz`` on ``B_R(0) ⊂ R^n`` with ``∂z/∂ν + βz = 0``
have the form ``r^{1-n/2} J_ν(κr)`` with ``ν = n/2 - 1 + ℓ`` and ``λ = κ²``.
Writing ``φ_ν(x) = Γ(ν+1)(2/x)^ν J_ν(x)`` (so ``φ_ν(0) = 1``) the profile is,
up to a constant, ``(κr)^ℓ φ_ν(κr)``, and the Robin condition at ``r = R``
becomes the secular function

    G(x) = (ℓ + βR) φ_ν(x) - x² φ_{ν+1}(x) / (2ν + 2),   x = κR,

which is analytic and nonzero at ``x = 0`` unless ``ℓ = β = 0``.  The
Dirichlet limit ``β = +∞`` uses ``G(x) = φ_ν(x)``.

Throughout, a ``RadialMode`` with ``norm = 1`` is the profile
``(κr)^ℓ φ_ν(κr)``: it equals 1 at the origin for ``ℓ = 0`` and behaves like
``κr`` near the origin for ``ℓ = 1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import BracketScanError, ConvergenceError, DomainError, PoleError
from .specfun import DEFAULT_SCAN_STEP, bessel_j_normalized, find_root, scan_brackets

__all__ = [
    "RadialMode",
    "BallGapFunctions",
    "unit_ball_volume",
    "robin_eigenvalue_ball",
    "ball_eigenvalue",
    "second_eigenvalue_check",
    "radial_eigenfunction",
    "radial_derivative",
    "secular_residual",
    "gap_functions",
    "g_eta_q",
    "gap_identity_residual",
    "lp_norm_radial",
]

DIRICHLET = math.inf
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10
X_MAX = 100.0


def unit_ball_volume(n: int) -> float:
    """Volume ``ω_n`` of the unit ball in ``R^n``."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def _phi(nu, x):
    return bessel_j_normalized(nu, np.abs(np.asarray(x, dtype=float)))


def _check_ball_args(dim, radius, beta_eff, ell):
    if int(dim) != dim or dim < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {dim}")
    if not (radius > 0 and math.isfinite(radius)):
        raise DomainError(f"radius must be positive and finite, got {radius}")
    if math.isnan(beta_eff) or beta_eff < 0:
        raise DomainError(f"Robin coefficient must be >= 0 or +inf, got {beta_eff}")
    if ell not in (0, 1):
        raise DomainError(f"angular index must be 0 or 1, got {ell}")


def _secular(dim, radius, beta_eff, ell):
    nu = dim / 2 - 1 + ell
    if math.isinf(beta_eff):
        return lambda x: _phi(nu, x)
    c = ell + beta_eff * radius
    return lambda x: c * _phi(nu, x) - x * x * _phi(nu + 1, x) / (2 * nu + 2)


@dataclass(frozen=True)
class RadialMode:
    """A radial eigenfunction ``norm · (κr)^ℓ φ_ν(κr)`` on ``B_R(0)``.

    ``beta_eff`` is the Robin coefficient applied on the sphere of radius
    ``radius`` (``math.inf`` for Dirichlet).  ``kappa = 0`` only for the
    constant Neumann mode.
    """

    dim: int
    radius: float
    beta_eff: float
    ell: int
    kappa: float
    norm: float = 1.0
    index: int = 1

    def __post_init__(self):
        _check_ball_args(self.dim, self.radius, self.beta_eff, self.ell)
        if self.kappa < 0 or not math.isfinite(self.kappa):
            raise DomainError(f"kappa must be finite and >= 0, got {self.kappa}")
        if self.kappa == 0 and not (self.ell == 0 and self.beta_eff == 0):
            raise DomainError("kappa = 0 is only the constant Neumann mode")
        if not self.norm > 0:
            raise DomainError("norm must be positive")

    @property
    def eigenvalue(self) -> float:
        return self.kappa * self.kappa

    @property
    def order(self) -> float:
        return self.dim / 2 - 1 + self.ell

    @property
    def is_dirichlet(self) -> bool:
        return math.isinf(self.beta_eff)

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    def __call__(self, r):
        return radial_eigenfunction(self, r)

    def __mul__(self, c):
        if not c > 0:
            return NotImplemented
        return replace(self, norm=self.norm * float(c))

    __rmul__ = __mul__

    def scaled_to(self, norm: float) -> "RadialMode":
        return replace(self, norm=float(norm))


def secular_residual(mode: RadialMode) -> float:
    """``|G(κR)|`` normalized by the size of its two terms."""
    if mode.kappa == 0:
        return 0.0
    x = mode.kappa * mode.radius
    nu = mode.order
    val = abs(float(_secular(mode.dim, mode.radius, mode.beta_eff, mode.ell)(x)))
    if mode.is_dirichlet:
        return val
    scale = (mode.ell + mode.beta_eff * mode.radius) * abs(float(_phi(nu, x)))
    scale += x * x * abs(float(_phi(nu + 1, x))) / (2 * nu + 2)
    return val / max(scale, 1e-300)


@lru_cache(maxsize=4096)
def _root_kappa(dim, radius, beta_eff, ell, index, step, x_max):
    if ell == 0 and beta_eff == 0 and index == 1:
        return 0.0
    g = _secular(dim, radius, beta_eff, ell)
    # with ℓ = β = 0 the constant mode occupies index 1
    want = index - 1 if (ell == 0 and beta_eff == 0) else index
    brackets = scan_brackets(lambda x: float(g(x)), 0.0, x_max, step=step, count=want)
    if len(brackets) < want:
        raise BracketScanError(
            f"only {len(brackets)} roots below κR = {x_max} for dim={dim}, β={beta_eff}, ℓ={ell}"
        )
    x = find_root(lambda t: float(g(t)), brackets[want - 1], tol=1e-14)
    return x / radius


def robin_eigenvalue_ball(dim: int, radius: float, beta_eff: float, ell: int = 0,
                          index: int = 1, *, step: float = DEFAULT_SCAN_STEP,
                          x_max: float = X_MAX) -> RadialMode:
    """The ``index``-th radial mode with angular index ``ell`` on ``B_radius(0)``.

    Parameters
    ----------
    dim : int
        Space dimension ``n >= 2``.
    radius : float
        Ball radius ``R``.
    beta_eff : float
        Robin coefficient on ``∂B_R``; ``0`` is Neumann, ``math.inf`` Dirichlet.
    ell : {0, 1}
        Angular index.  ``ell = 0`` gives ``λ_1``; ``ell = 1`` the radial part of
        the (n-fold) second eigenvalue.
    index : int
        1-based root index within the branch.
    step, x_max : float
        Scan step and range in the dimensionless variable ``κR``.

    Returns
    -------
    RadialMode
    """
    beta_eff = float(beta_eff)
    _check_ball_args(dim, radius, beta_eff, ell)
    if int(index) != index or index < 1:
        raise DomainError(f"index must be a positive integer, got {index}")
    kappa = _root_kappa(int(dim), float(radius), beta_eff, int(ell), int(index), float(step),
                        float(x_max))
    return RadialMode(int(dim), float(radius), beta_eff, int(ell), kappa, 1.0, int(index))


def ball_eigenvalue(dim: int, radius: float, beta_eff: float, k: int) -> float:
    """``λ_k(B_R, β)`` for ``k`` in {1, 2}."""
    if k == 1:
        return robin_eigenvalue_ball(dim, radius, beta_eff, 0, 1).eigenvalue
    if k == 2:
        return second_eigenvalue_check(dim, radius, beta_eff)[0]
    raise DomainError("only k = 1, 2 are supported")


@lru_cache(maxsize=1024)
def second_eigenvalue_check(dim: int, radius: float, beta_eff: float) -> tuple[float, bool]:
    """True second eigenvalue and whether the ``ℓ = 1`` branch attains it.

    The ``ℓ = 0`` second root is computed alongside; if it were smaller it is
    returned instead and a warning is issued.
    """
    lam_ell1 = robin_eigenvalue_ball(dim, radius, beta_eff, 1, 1).eigenvalue
    lam_ell0 = robin_eigenvalue_ball(dim, radius, beta_eff, 0, 2).eigenvalue
    if lam_ell1 <= lam_ell0:
        return lam_ell1, True
    warnings.warn(f"ℓ=0 branch gives the second eigenvalue for dim={dim}, R={radius}, "
                  f"β={beta_eff}", RuntimeWarning)
    return lam_ell0, False


def _profile(mode, r):
    x = mode.kappa * r
    val = _phi(mode.order, x)
    if mode.ell == 1:
        val = x * val
    return mode.norm * val


def radial_eigenfunction(mode: RadialMode, r):
    """Value of the mode at radius ``r`` in ``[0, R]``."""
    r_arr = np.asarray(r, dtype=float)
    tol = 1e-12 * mode.radius
    if np.any(r_arr < 0) or np.any(r_arr > mode.radius + tol):
        raise DomainError(f"r must lie in [0, {mode.radius}]")
    out = _profile(mode, np.minimum(r_arr, mode.radius))
    return float(out) if np.ndim(out) == 0 else out


def radial_derivative(mode: RadialMode, r):
    """``dz/dr`` from ``φ_ν' (x) = -x φ_{ν+1}(x) / (2ν + 2)``."""
    r = np.asarray(r, dtype=float)
    k, nu = mode.kappa, mode.order
    x = k * r
    dphi = -x * _phi(nu + 1, x) / (2 * nu + 2)
    if mode.ell == 0:
        out = mode.norm * k * dphi
    else:
        out = mode.norm * k * (_phi(nu, x) + x * dphi)
    return float(out) if np.ndim(out) == 0 else out


def _rquad(fun, a, b, points=None):
    val, err = integrate.quad(fun, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=400,
                              points=points, full_output=False)
    if err > max(QUAD_EPSABS, QUAD_EPSREL * abs(val)) * 100:
        raise ConvergenceError(f"radial quadrature did not converge: {val} ± {err}")
    return val


def lp_norm_radial(mode: RadialMode, p: float) -> float:
    """``(n ω_n ∫_0^R |z(r)|^p r^{n-1} dr)^{1/p}``."""
    if not p > 0:
        raise DomainError("p must be positive")
    n = mode.dim
    if mode.kappa == 0:
        return mode.norm * mode.volume ** (1.0 / p)
    integral = _rquad(lambda r: abs(float(_profile(mode, r))) ** p * r ** (n - 1), 0.0, mode.radius)
    return (n * unit_ball_volume(n) * integral) ** (1.0 / p)


@dataclass(frozen=True)
class BallGapFunctions:
    """``g = z_2/z_1``, ``η = g'² + (n-1)g²/r²`` and ``q = r g'/g`` on a ball.

    ``g`` is continued by its boundary value for ``r >= R``.
    """

    mode1: RadialMode
    mode2: RadialMode
    r_grid: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        m1, m2 = self.mode1, self.mode2
        if m1.ell != 0 or m2.ell != 1:
            raise DomainError("mode1 must have ℓ = 0 and mode2 ℓ = 1")
        if (m1.dim, m1.radius, m1.beta_eff) != (m2.dim, m2.radius, m2.beta_eff):
            raise DomainError("gap modes must share dimension, radius and β")
        if m1.kappa == 0:
            raise DomainError("the constant Neumann mode has no gap functions")

    @property
    def dim(self) -> int:
        return self.mode1.dim

    @property
    def radius(self) -> float:
        return self.mode1.radius

    @property
    def gap(self) -> float:
        return self.mode2.eigenvalue - self.mode1.eigenvalue

    def _raw(self, r):
        """``g/r`` and ``q`` on ``[0, R)`` from the closed forms."""
        n = self.dim
        a, b = n / 2 - 1, n / 2
        k1, k2 = self.mode1.kappa, self.mode2.kappa
        x1, x2 = k1 * r, k2 * r
        den = _phi(a, x1)
        if np.any(den <= 0):
            raise PoleError("z_1 vanishes inside the ball")
        num = _phi(b, x2)
        g_over_r = (self.mode2.norm / self.mode1.norm) * k2 * num / den
        with np.errstate(divide="ignore", invalid="ignore"):
            q = (1.0 - x2 * x2 * _phi(b + 1, x2) / ((2 * b + 2) * num)
                 + x1 * x1 * _phi(b, x1) / ((2 * a + 2) * den))
        return g_over_r, q

    @property
    def _boundary(self):
        """``g(R)`` and, in the Dirichlet case, the cutoff below which ratios are safe."""
        R = self.radius
        if not self.mode1.is_dirichlet:
            g_over_r, _ = self._raw(np.array([R]))
            return float(g_over_r[0]) * R, R
        # l'Hôpital: g(R) = z_2'(R) / z_1'(R), and g'(R) = q(R) = 0
        g_r = float(radial_derivative(self.mode2, R) / radial_derivative(self.mode1, R))
        return g_r, R * (1 - 1e-6)

    def evaluate(self, r):
        """Return ``(g, g/r, g', η, q)`` at radii ``r >= 0``."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r < 0):
            raise DomainError("r must be nonnegative")
        R, n = self.radius, self.dim
        g_R, r_cut = self._boundary
        g_over_r = np.empty_like(r)
        q = np.zeros_like(r)
        inner = r < r_cut
        gr_in, q_in = self._raw(r[inner])
        g_over_r[inner] = gr_in
        q[inner] = q_in
        mid = (r >= r_cut) & (r < R)
        if np.any(mid):
            # linear bridge to the l'Hôpital limit over the last 1e-6 R
            gr_c, q_c = self._raw(np.array([r_cut]))
            w = (R - r[mid]) / (R - r_cut)
            g_over_r[mid] = (w * gr_c[0] * r_cut + (1 - w) * g_R) / r[mid]
            q[mid] = w * q_c[0]
        outer = r >= R
        g_over_r[outer] = g_R / r[outer]
        g = g_over_r * r
        g_prime = q * g_over_r
        eta = g_over_r ** 2 * (q * q + n - 1)
        return g, g_over_r, g_prime, eta, q

    def g(self, r):
        return self.evaluate(r)[0]

    def eta(self, r):
        return self.evaluate(r)[3]

    def q(self, r):
        return self.evaluate(r)[4]


def gap_functions(dim: int, radius: float, beta_eff: float, r_grid=None) -> BallGapFunctions:
    """Gap functions built from the first ``ℓ = 0`` and ``ℓ = 1`` modes of ``B_R``."""
    m1 = robin_eigenvalue_ball(dim, radius, beta_eff, 0, 1)
    m2 = robin_eigenvalue_ball(dim, radius, beta_eff, 1, 1)
    return BallGapFunctions(m1, m2, r_grid)


def g_eta_q(gap: BallGapFunctions, r):
    """``(g, η, q)`` at ``r``; scalars in, scalars out."""
    g, _, _, eta, q = gap.evaluate(r)
    if np.ndim(r) == 0:
        return float(g[0]), float(eta[0]), float(q[0])
    return g, eta, q


def gap_identity_residual(gap: BallGapFunctions) -> float:
    """Relative defect of ``λ_2 - λ_1 = ∫ η z_1² / ∫ g² z_1²`` on the ball."""
    n, R = gap.dim, gap.radius
    m1 = gap.mode1

    def num(r):
        _, _, _, eta, _ = gap.evaluate(r)
        return float(eta[0] * _profile(m1, r) ** 2) * r ** (n - 1)

    def den(r):
        g = gap.evaluate(r)[0]
        return float((g[0] * _profile(m1, r)) ** 2) * r ** (n - 1)

    ratio = _rquad(num, 0.0, R) / _rquad(den, 0.0, R)
    return abs(gap.gap - ratio) / gap.gap
