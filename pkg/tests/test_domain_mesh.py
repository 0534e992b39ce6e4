import io
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from robinspec.errors import DomainError, GeometryError, RefinementCapError
from robinspec.femspec import (
    PolygonDomain,
    make_domain,
    parse_domain,
    read_mesh,
    refine,
    triangulate,
    write_mesh,
)


def test_standard_areas():
    assert make_domain("square").area == pytest.approx(1.0)
    assert make_domain("rectangle", 1, 2).area == pytest.approx(2.0)
    assert make_domain("lshape").area == pytest.approx(3.0)
    m = 64
    assert_allclose(make_domain("disk", m=m).area, 0.5 * m * math.sin(2 * math.pi / m), rtol=1e-14)
    assert_allclose(make_domain("ellipse", 2, 1, m=m).area, m * math.sin(2 * math.pi / m), rtol=1e-14)


def test_geometry_quantities():
    sq = make_domain("square")
    assert sq.convex
    assert sq.diameter == pytest.approx(math.sqrt(2))
    assert sq.p0 == pytest.approx(0.5)
    assert sq.perimeter == pytest.approx(4.0)
    assert_allclose(sq.centroid, (0.0, 0.0), atol=1e-15)
    assert make_domain("rectangle", 1, 3).p0 == pytest.approx(1.5)
    L = make_domain("lshape")
    assert not L.convex
    assert_allclose(L.centroid, (-1 / 6, -1 / 6), atol=1e-14)
    assert sq.curvature_term == 0.0
    assert make_domain("disk", m=128).curvature_term == 1 / 128


def test_invalid_polygons():
    with pytest.raises(GeometryError):
        PolygonDomain([(0, 0), (0, 1), (1, 1), (1, 0)])  # clockwise
    with pytest.raises(GeometryError):
        PolygonDomain([(0, 0), (1, 1), (1, 0), (0, 1)])  # bow tie
    with pytest.raises(GeometryError):
        PolygonDomain([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(DomainError):
        make_domain("disk", m=8)
    with pytest.raises(DomainError):
        make_domain("triangle")


def test_parse_descriptors():
    assert parse_domain("rectangle(1,2)") == make_domain("rectangle", 1, 2)
    assert parse_domain("ellipse(2,1,m=64)").m == 64
    assert parse_domain("disk", m=100).name == "disk(m=100)"
    custom = parse_domain({"kind": "custom", "vertices": [[0, 0], [2, 0], [0, 1]], "name": "tri"})
    assert custom.area == pytest.approx(1.0)
    with pytest.raises(DomainError):
        parse_domain("rectangle(1,")


def test_translation():
    sq = make_domain("square").translated((3, 7))
    assert_allclose(sq.centroid, (3, 7))
    assert sq.area == pytest.approx(1.0)


@pytest.mark.parametrize("spec", ["square", "lshape", "disk(m=64)", "ellipse(2,1,m=64)"])
def test_mesh_covers_domain(spec):
    dom = parse_domain(spec)
    mesh = triangulate(dom, 0.1)
    mesh.check()
    assert mesh.h <= 0.1 + 1e-12
    assert_allclose(mesh.areas.sum(), dom.area, rtol=1e-12)
    edges = np.sort(np.vstack([mesh.triangles[:, [0, 1]], mesh.triangles[:, [1, 2]],
                               mesh.triangles[:, [2, 0]]]), axis=1)
    n_edges = len(np.unique(edges, axis=0))
    # Euler characteristic of a disk-like region
    assert mesh.n_nodes - n_edges + mesh.n_triangles == 1


def test_boundary_nodes_lie_on_polygon():
    dom = make_domain("lshape")
    mesh = triangulate(dom, 0.1)
    pts = mesh.nodes[mesh.boundary_nodes]
    v = dom.vertices
    a, b = v, np.roll(v, -1, axis=0)
    d = b - a
    t = np.clip(np.einsum("pij,ij->pi", pts[:, None, :] - a[None], d) / (d * d).sum(1), 0, 1)
    proj = a[None] + t[..., None] * d[None]
    dist = np.linalg.norm(pts[:, None, :] - proj, axis=2).min(axis=1)
    assert dist.max() < 1e-12
    assert_allclose(np.hypot(*np.diff(mesh.nodes[mesh.boundary_edges], axis=1)[:, 0].T).sum(),
                    dom.perimeter, rtol=1e-12)


def test_refinement_is_nested():
    mesh = triangulate(make_domain("square"), 0.2)
    fine = refine(mesh)
    assert fine.n_triangles == 4 * mesh.n_triangles
    assert_allclose(fine.nodes[: mesh.n_nodes], mesh.nodes)
    assert fine.h == pytest.approx(mesh.h / 2)
    h_half = triangulate(make_domain("square"), 0.1)
    assert h_half.n_triangles == 4 * triangulate(make_domain("square"), 0.2).n_triangles


def test_mesh_roundtrip():
    mesh = triangulate(make_domain("disk", m=32), 0.3)
    buf = io.StringIO()
    write_mesh(mesh, buf)
    back = read_mesh(io.StringIO(buf.getvalue()))
    assert np.array_equal(back.nodes, mesh.nodes)
    assert np.array_equal(back.triangles, mesh.triangles)
    assert np.array_equal(back.boundary_edges, mesh.boundary_edges)


def test_node_cap():
    with pytest.raises(RefinementCapError):
        triangulate(make_domain("square"), 0.01, node_cap=1000)


def test_triangulation_is_deterministic():
    a = triangulate(make_domain("ellipse", 2, 1, m=64), 0.1)
    b = triangulate(make_domain("ellipse", 2, 1, m=64), 0.1)
    assert np.array_equal(a.nodes, b.nodes) and np.array_equal(a.triangles, b.triangles)
