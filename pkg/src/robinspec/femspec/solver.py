"""P1 finite elements for the Robin, Neumann and Dirichlet Laplacian."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import linalg as splinalg

from ..ballspec import robin_eigenvalue_ball, unit_ball_volume
from ..errors import DomainError, SolverError
from .domain import PolygonDomain
from .mesh import Mesh, triangulate

__all__ = [
    "SpectralPair",
    "RadiiReport",
    "assemble",
    "robin_spectrum",
    "solve_on_mesh",
    "boundary_max",
    "superlevel_volume",
    "triangle_superlevel_areas",
    "radii",
    "DENSE_LIMIT",
]

DENSE_LIMIT = 3000
RESIDUAL_TOL = 1e-10
# consistent-mass P1 ground states at very large β can dip just below zero
# near corners; dips up to this size (relative to max ψ_1 = 1) are clipped
NEGATIVITY_TOL = 1e-3


def assemble(mesh: Mesh):
    """Stiffness ``K``, consistent mass ``M`` and boundary mass ``B`` (CSR)."""
    nodes, tris = mesh.nodes, mesh.triangles
    n = mesh.n_nodes
    p = nodes[tris]
    area = mesh.areas
    # barycentric gradients: grad λ_i = rot(p_k - p_j) / (2A)
    e = np.stack([p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]], axis=1)
    grad = np.stack([-e[..., 1], e[..., 0]], axis=-1) / (2 * area)[:, None, None]
    k_loc = area[:, None, None] * np.einsum("tik,tjk->tij", grad, grad)
    m_ref = (np.ones((3, 3)) + np.eye(3)) / 12.0
    m_loc = area[:, None, None] * m_ref
    rows = np.repeat(tris, 3, axis=1).ravel()
    cols = np.tile(tris, (1, 3)).ravel()
    K = sparse.csr_matrix((k_loc.ravel(), (rows, cols)), shape=(n, n))
    M = sparse.csr_matrix((m_loc.ravel(), (rows, cols)), shape=(n, n))
    bed = mesh.boundary_edges
    d = nodes[bed[:, 1]] - nodes[bed[:, 0]]
    length = np.hypot(d[:, 0], d[:, 1])
    b_loc = length[:, None, None] * (np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0)
    brow = np.repeat(bed, 2, axis=1).ravel()
    bcol = np.tile(bed, (1, 2)).ravel()
    B = sparse.csr_matrix((b_loc.ravel(), (brow, bcol)), shape=(n, n))
    return K, M, B


@dataclass(frozen=True)
class SpectralPair:
    """First two discrete eigenvalues and the sup-normalized first eigenvector."""

    lambda1: float
    lambda2: float
    psi1: np.ndarray = field(repr=False)
    mesh: Mesh = field(repr=False)
    beta: float
    psi2: np.ndarray | None = field(default=None, repr=False, compare=False)
    residual: float = 0.0
    domain: PolygonDomain | None = field(default=None, repr=False, compare=False)
    h: float | None = None
    clipped: float = 0.0

    def __post_init__(self):
        if not (0 <= self.lambda1 + 1e-9 * max(1.0, self.lambda2) and self.lambda1 < self.lambda2):
            raise SolverError(f"eigenvalues out of order: {self.lambda1}, {self.lambda2}")

    @property
    def is_dirichlet(self) -> bool:
        return math.isinf(self.beta)

    @property
    def ratio(self) -> float:
        return self.lambda2 / self.lambda1

    def operators(self):
        """``(K, M, B)`` for this mesh (recomputed, not stored)."""
        return _assembled(self.mesh)

    def integrate(self, values) -> float:
        """``∫ u`` for nodal values ``u`` of a P1 function."""
        _, M, _ = self.operators()
        return float(np.sum(M @ np.asarray(values, dtype=float)))


_ASSEMBLY_CACHE: dict[int, tuple] = {}


def _assembled(mesh: Mesh):
    key = id(mesh)
    hit = _ASSEMBLY_CACHE.get(key)
    if hit is None or hit[0] is not mesh:
        if len(_ASSEMBLY_CACHE) > 16:
            _ASSEMBLY_CACHE.clear()
        hit = (mesh, assemble(mesh))
        _ASSEMBLY_CACHE[key] = hit
    return hit[1]


def _smallest_two(A, M):
    n = A.shape[0]
    if n < 3:
        raise SolverError("need at least three unknowns for two eigenpairs")
    if n <= DENSE_LIMIT:
        w, v = linalg.eigh(A.toarray(), M.toarray(), subset_by_index=[0, 1])
        return w, v
    try:
        w, v = splinalg.eigsh(A.tocsc(), k=2, M=M.tocsc(), sigma=-1.0, which="LM",
                              v0=np.ones(n), tol=0)
    except splinalg.ArpackNoConvergence as exc:
        raise SolverError("ARPACK did not converge") from exc
    order = np.argsort(w)
    return w[order], v[:, order]


def solve_on_mesh(mesh: Mesh, beta: float, domain: PolygonDomain | None = None,
                  h: float | None = None) -> SpectralPair:
    """Two smallest eigenpairs of ``(K + βB)u = λMu`` on a given mesh.

    ``beta = math.inf`` removes the boundary nodes (Dirichlet).
    """
    beta = float(beta)
    if math.isnan(beta) or beta < 0:
        raise DomainError(f"β must be >= 0 or +inf, got {beta}")
    K, M, B = _assembled(mesh)
    n = mesh.n_nodes
    if math.isinf(beta):
        free = np.setdiff1d(np.arange(n), mesh.boundary_nodes)
        A = K[free][:, free]
        Mf = M[free][:, free]
    else:
        free = np.arange(n)
        A = (K + beta * B).tocsr()
        Mf = M
    w, v = _smallest_two(A, Mf)
    res = 0.0
    for j in range(2):
        u = v[:, j]
        r = A @ u - w[j] * (Mf @ u)
        res = max(res, float(np.linalg.norm(r) / (np.linalg.norm(Mf @ u) * max(1.0, abs(w[j])))))
    if res > RESIDUAL_TOL:
        raise SolverError(f"eigenpair residual {res:.3e} above tolerance")
    u = v[:, 0]
    u = u * np.sign(u[np.argmax(np.abs(u))])
    u = u / u.max()
    # the constant Neumann mode may carry rounding noise below 1; snap it
    if beta == 0 and np.ptp(u) < 1e-10:
        u = np.ones_like(u)
    clipped = max(0.0, -float(u.min()))
    if clipped > NEGATIVITY_TOL:
        raise SolverError(f"first eigenvector not positive (min {u.min():.3e})")
    if clipped:
        u = np.maximum(u, 0.0)
    psi1 = np.zeros(n)
    psi1[free] = u
    psi2 = np.zeros(n)
    psi2[free] = v[:, 1]
    lam1 = float(w[0])
    if beta == 0 and abs(lam1) < 1e-10 * max(1.0, float(w[1])):
        lam1 = 0.0
    psi1.setflags(write=False)
    return SpectralPair(lam1, float(w[1]), psi1, mesh, beta, psi2, res, domain, h, clipped)


@lru_cache(maxsize=48)
def _spectrum_cached(domain: PolygonDomain, beta: float, h: float) -> SpectralPair:
    mesh = triangulate(domain, h)
    return solve_on_mesh(mesh, beta, domain, h)


def robin_spectrum(domain: PolygonDomain, beta: float, h: float) -> SpectralPair:
    """First two Robin eigenpairs on ``domain`` with P1 elements at mesh size ``h``.

    Parameters
    ----------
    domain : PolygonDomain
    beta : float
        Robin coefficient; ``0`` for Neumann and ``math.inf`` for Dirichlet.
    h : float
        Maximum edge length.

    Returns
    -------
    SpectralPair
        Results are memoized on ``(domain, beta, h)``.
    """
    return _spectrum_cached(domain, float(beta), float(h))


def boundary_max(pair: SpectralPair) -> float:
    """``M = max ψ_1`` over boundary nodes (exact for P1 data)."""
    return float(pair.psi1[pair.mesh.boundary_nodes].max())


def triangle_superlevel_areas(vals: np.ndarray, areas: np.ndarray, t: float) -> np.ndarray:
    """Area of ``{u > t}`` inside each triangle for a linear ``u``.

    ``vals`` holds the three vertex values per triangle.
    """
    v = np.sort(vals, axis=1)
    v0, v1, v2 = v[:, 0], v[:, 1], v[:, 2]
    out = np.zeros(len(v))
    full = t < v0
    out[full] = areas[full]
    low = (v0 <= t) & (t < v1)
    if np.any(low):
        a, b, c = v0[low], v1[low], v2[low]
        out[low] = areas[low] * (1 - (t - a) ** 2 / ((b - a) * (c - a)))
    high = (v1 <= t) & (t < v2)
    if np.any(high):
        a, b, c = v0[high], v1[high], v2[high]
        out[high] = areas[high] * (c - t) ** 2 / ((c - a) * (c - b))
    return out


def superlevel_volume(pair: SpectralPair, t: float) -> float:
    """Exact measure of ``{ψ_1 > t}`` for the P1 interpolant."""
    mesh = pair.mesh
    return float(triangle_superlevel_areas(pair.psi1[mesh.triangles], mesh.areas, float(t)).sum())


@dataclass(frozen=True)
class RadiiReport:
    """Radii ``R*``, ``R_λ``, ``R_M`` and their minimum for a planar domain."""

    r_star: float
    r_lambda: float
    m_value: float
    omega_m_volume: float
    r_m: float
    r: float
    lambda1_ball: float = float("nan")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def radii(pair: SpectralPair, domain: PolygonDomain, beta: float) -> RadiiReport:
    """Radii entering the eigenvalue-ratio bound.

    ``R_λ`` compares ``λ_1`` with that of the equal-area disk carrying the
    same ``β``; ``R_M`` is the radius of the disk with the area of
    ``{ψ_1 > M}``.
    """
    beta = float(beta)
    if not beta > 0:
        raise DomainError("radii need β > 0")
    n = 2
    omega = unit_ball_volume(n)
    r_star = (domain.area / omega) ** (1 / n)
    lam_ball = robin_eigenvalue_ball(n, r_star, beta, 0, 1).eigenvalue
    r_lambda = math.sqrt(lam_ball / pair.lambda1) * r_star
    m_value = 0.0 if math.isinf(beta) else boundary_max(pair)
    vol = superlevel_volume(pair, m_value)
    r_m = (vol / omega) ** (1 / n)
    return RadiiReport(r_star, r_lambda, m_value, vol, r_m, min(r_lambda, r_m), lam_ball)
