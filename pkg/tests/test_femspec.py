import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oracles import bisect
from robinspec.ballspec import robin_eigenvalue_ball, second_eigenvalue_check
from robinspec.errors import DomainError
from robinspec.femspec import (
    assemble,
    make_domain,
    radii,
    robin_spectrum,
    solve_on_mesh,
    superlevel_volume,
    triangle_superlevel_areas,
    triangulate,
)
from robinspec.femspec import solver


def interval_robin(beta):
    """Even and odd Robin wave numbers on (-1/2, 1/2): k tan(k/2) = β, k cot(k/2) = -β."""
    even = bisect(lambda k: k * math.sin(k / 2) - beta * math.cos(k / 2), 1e-12, math.pi - 1e-12)
    odd = bisect(lambda k: k * math.cos(k / 2) + beta * math.sin(k / 2), math.pi, 2 * math.pi)
    return even, odd


def test_assembly_identities():
    dom = make_domain("lshape")
    mesh = triangulate(dom, 0.2)
    K, M, B = assemble(mesh)
    one = np.ones(mesh.n_nodes)
    assert_allclose(K @ one, 0.0, atol=1e-12)
    assert one @ (M @ one) == pytest.approx(dom.area, rel=1e-13)
    assert one @ (B @ one) == pytest.approx(dom.perimeter, rel=1e-13)
    x = mesh.nodes[:, 0]
    # ∫|∇x|² = area for the exactly represented linear function
    assert x @ (K @ x) == pytest.approx(dom.area, rel=1e-12)
    assert abs(K - K.T).max() < 1e-14 and abs(M - M.T).max() < 1e-14


def test_dirichlet_square():
    pair = robin_spectrum(make_domain("square"), math.inf, 0.04)
    assert_allclose(pair.lambda1, 2 * math.pi ** 2, rtol=5e-3)
    assert_allclose(pair.lambda2, 5 * math.pi ** 2, rtol=5e-3)
    assert pair.lambda1 > 2 * math.pi ** 2  # conforming elements bound from above


def test_neumann_square():
    pair = robin_spectrum(make_domain("square"), 0.0, 0.05)
    assert pair.lambda1 == 0.0
    assert np.all(pair.psi1 == 1.0)
    assert_allclose(pair.lambda2, math.pi ** 2, rtol=5e-3)


@pytest.mark.parametrize("beta", [0.1, 1.0, 10.0])
def test_robin_square_separable(beta):
    even, odd = interval_robin(beta)
    pair = robin_spectrum(make_domain("square"), beta, 0.04)
    assert_allclose(pair.lambda1, 2 * even ** 2, rtol=5e-3)
    assert_allclose(pair.lambda2, even ** 2 + odd ** 2, rtol=5e-3)


@pytest.mark.parametrize("beta", [0.1, 1.0, 10.0])
def test_robin_disk_against_ball(beta):
    dom = make_domain("disk", m=256)
    pair = robin_spectrum(dom, beta, 0.05)
    r = math.sqrt(dom.area / math.pi)
    assert_allclose(pair.lambda1, robin_eigenvalue_ball(2, r, beta).eigenvalue, rtol=5e-3)
    assert_allclose(pair.lambda2, second_eigenvalue_check(2, r, beta)[0], rtol=5e-3)


def test_eigenvector_normalization():
    pair = robin_spectrum(make_domain("ellipse", 2, 1, m=64), 1.0, 0.1)
    assert pair.psi1.max() == 1.0
    assert pair.psi1.min() > 0
    assert not pair.psi1.flags.writeable
    assert pair.residual < 1e-9
    d = robin_spectrum(make_domain("ellipse", 2, 1, m=64), math.inf, 0.1)
    assert np.all(d.psi1[d.mesh.boundary_nodes] == 0.0)


def test_dense_and_sparse_paths_agree(monkeypatch):
    mesh = triangulate(make_domain("rectangle", 1, 2), 0.08)
    assert mesh.n_nodes <= solver.DENSE_LIMIT
    dense = solve_on_mesh(mesh, 2.0)
    monkeypatch.setattr(solver, "DENSE_LIMIT", 10)
    sparse = solve_on_mesh(mesh, 2.0)
    assert_allclose([sparse.lambda1, sparse.lambda2], [dense.lambda1, dense.lambda2], rtol=1e-10)
    assert_allclose(sparse.psi1, dense.psi1, atol=1e-8)


def test_negative_beta_rejected():
    mesh = triangulate(make_domain("square"), 0.2)
    with pytest.raises(DomainError):
        solve_on_mesh(mesh, -1.0)


def test_results_are_memoized():
    dom = make_domain("square")
    assert robin_spectrum(dom, 1.0, 0.1) is robin_spectrum(dom, 1.0, 0.1)


def test_triangle_superlevel_areas_exact():
    # u = x on the unit right triangle: |{x > t}| = (1 - t)² / 2
    vals = np.array([[0.0, 1.0, 0.0]])
    area = np.array([0.5])
    for t in (-0.5, 0.0, 0.3, 0.7, 1.0):
        expected = 0.5 if t < 0 else 0.5 * (1 - t) ** 2
        assert_allclose(triangle_superlevel_areas(vals, area, t), [expected], atol=1e-15)


def test_superlevel_areas_of_linear_function():
    mesh = triangulate(make_domain("square"), 0.2)
    u = mesh.nodes[:, 0] + 0.5
    for t in (0.1, 0.5, 0.9):
        total = triangle_superlevel_areas(u[mesh.triangles], mesh.areas, t).sum()
        assert total == pytest.approx(1 - t, abs=1e-14)


def test_superlevel_volume_bounds():
    pair = robin_spectrum(make_domain("square"), 1.0, 0.1)
    assert superlevel_volume(pair, 0.0) == pytest.approx(1.0, rel=1e-14)
    assert superlevel_volume(pair, 1.0) == 0.0
    vols = [superlevel_volume(pair, t) for t in np.linspace(pair.psi1.min(), 1, 11)]
    assert np.all(np.diff(vols) < 0)


def test_radii_on_disk():
    dom = make_domain("disk", m=256)
    beta = 1.0
    rad = radii(robin_spectrum(dom, beta, 0.05), dom, beta)
    assert rad.r_star == pytest.approx(math.sqrt(dom.area / math.pi))
    assert rad.r_lambda == pytest.approx(rad.r_star, rel=2e-3)
    assert rad.r_m == pytest.approx(rad.r_star, rel=2e-3)
    assert rad.r == min(rad.r_lambda, rad.r_m)
    with pytest.raises(DomainError):
        radii(robin_spectrum(dom, 0.0, 0.1), dom, 0.0)


def test_dirichlet_radii_use_whole_domain():
    dom = make_domain("square")
    rad = radii(robin_spectrum(dom, math.inf, 0.05), dom, math.inf)
    assert rad.m_value == 0.0
    assert rad.omega_m_volume == pytest.approx(1.0, rel=1e-3)
    assert rad.r_lambda < rad.r_star
