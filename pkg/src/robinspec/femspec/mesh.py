"""Conforming triangulations of polygons and uniform refinement.

A quality coarse mesh comes from Shewchuk's Triangle (``triangle`` package)
and is then refined by uniform midpoint subdivision, so meshes at ``h`` and
``h/2`` are nested and differ by exactly a factor 4 in triangle count.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import triangle as tr

from ..errors import MeshError, RefinementCapError
from .domain import PolygonDomain

__all__ = ["Mesh", "triangulate", "refine", "read_mesh", "write_mesh", "DEFAULT_NODE_CAP"]

DEFAULT_NODE_CAP = 200_000


def _edge_lengths(nodes, tris):
    p = nodes[tris]
    e = p[:, [1, 2, 0]] - p
    return np.hypot(e[..., 0], e[..., 1])


def _boundary_edges(tris):
    """Edges owned by a single triangle, oriented as in that triangle."""
    e = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    key = np.sort(e, axis=1)
    _, inv, counts = np.unique(key, axis=0, return_inverse=True, return_counts=True)
    inv = inv.ravel()
    if np.any(counts > 2):
        raise MeshError("non-manifold edge shared by more than two triangles")
    return e[counts[inv] == 1]


@dataclass(frozen=True)
class Mesh:
    """Triangulation with positively oriented triangles and outward boundary edges."""

    nodes: np.ndarray = field(repr=False)
    triangles: np.ndarray = field(repr=False)
    boundary_edges: np.ndarray = field(repr=False)

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        tris = np.ascontiguousarray(self.triangles, dtype=np.int64)
        bed = np.ascontiguousarray(self.boundary_edges, dtype=np.int64).reshape(-1, 2)
        if tris.ndim != 2 or tris.shape[1] != 3 or nodes.ndim != 2 or nodes.shape[1] != 2:
            raise MeshError("malformed mesh arrays")
        if tris.size and (tris.min() < 0 or tris.max() >= len(nodes)):
            raise MeshError("triangle index out of range")
        for a in (nodes, tris, bed):
            a.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "triangles", tris)
        object.__setattr__(self, "boundary_edges", bed)
        if np.any(self.areas <= 0):
            raise MeshError("triangles must have positive area")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        d1, d2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    @property
    def h(self) -> float:
        """Maximum edge length."""
        return float(_edge_lengths(self.nodes, self.triangles).max())

    @property
    def boundary_nodes(self) -> np.ndarray:
        return np.unique(self.boundary_edges)

    @property
    def boundary_normals(self) -> np.ndarray:
        """Outward unit normals ``(dy, -dx)/L`` of the boundary edges."""
        d = self.nodes[self.boundary_edges[:, 1]] - self.nodes[self.boundary_edges[:, 0]]
        length = np.hypot(d[:, 0], d[:, 1])
        return np.column_stack([d[:, 1], -d[:, 0]]) / length[:, None]

    def check(self) -> None:
        """Raise ``MeshError`` if the boundary edges do not match the topology."""
        derived = _boundary_edges(self.triangles)
        a = {tuple(e) for e in derived.tolist()}
        b = {tuple(e) for e in self.boundary_edges.tolist()}
        if a != b:
            raise MeshError("boundary edges disagree with the triangle topology")


def refine(mesh: Mesh) -> Mesh:
    """One uniform midpoint refinement (every triangle split into four)."""
    tris = mesh.triangles
    nn = mesh.n_nodes
    e = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]])
    key = np.sort(e, axis=1)
    uniq, inv = np.unique(key, axis=0, return_inverse=True)
    inv = inv.ravel()
    mid = nn + inv.reshape(3, -1).T  # midpoints of edges 01, 12, 20
    nodes = np.vstack([mesh.nodes, 0.5 * (mesh.nodes[uniq[:, 0]] + mesh.nodes[uniq[:, 1]])])
    a, b, c = tris.T
    m01, m12, m20 = mid.T
    new = np.stack([
        np.column_stack([a, m01, m20]),
        np.column_stack([m01, b, m12]),
        np.column_stack([m20, m12, c]),
        np.column_stack([m01, m12, m20]),
    ], axis=1).reshape(-1, 3)
    bed = mesh.boundary_edges
    codes = uniq[:, 0] * nn + uniq[:, 1]  # sorted, since uniq is lexicographic
    bkey = np.sort(bed, axis=1)
    bmid = nn + np.searchsorted(codes, bkey[:, 0] * nn + bkey[:, 1])
    new_bed = np.stack([np.column_stack([bed[:, 0], bmid]),
                        np.column_stack([bmid, bed[:, 1]])], axis=1).reshape(-1, 2)
    return Mesh(nodes, new, new_bed)


def _split_polygon(vertices, hmax):
    pts = []
    for i in range(len(vertices)):
        p, q = vertices[i], vertices[(i + 1) % len(vertices)]
        k = max(1, int(math.ceil(np.hypot(*(q - p)) / hmax)))
        t = np.arange(k)[:, None] / k
        pts.append(p + t * (q - p))
    pts = np.vstack(pts)
    n = len(pts)
    segs = np.column_stack([np.arange(n), (np.arange(n) + 1) % n])
    return pts, segs


def _coarse(domain: PolygonDomain, hmax: float) -> Mesh:
    pts, segs = _split_polygon(domain.vertices, hmax)
    area = math.sqrt(3) / 4 * hmax * hmax
    for _ in range(60):
        out = tr.triangulate({"vertices": pts, "segments": segs}, f"pq30a{area:.17g}Q")
        nodes, tris = out["vertices"], out["triangles"]
        if _edge_lengths(nodes, tris).max() <= hmax:
            break
        area *= 0.8
    else:  # pragma: no cover - Triangle always meets a small enough area bound
        raise MeshError("coarse mesh did not reach the requested edge length")
    # Triangle emits CCW triangles; keep a guard anyway
    p = nodes[tris]
    d1, d2 = p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]
    flip = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0] < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    return Mesh(nodes, tris, _boundary_edges(tris))


def triangulate(domain: PolygonDomain, h_target: float, node_cap: int = DEFAULT_NODE_CAP) -> Mesh:
    """Conforming triangulation of ``domain`` with maximum edge ``<= h_target``.

    The coarse mesh is generated at ``H = h_target·2^k``, with ``k`` chosen
    so ``H`` is comparable to the domain scale, and refined ``k`` times.
    Deterministic for fixed inputs.

    Raises
    ------
    RefinementCapError
        If the mesh would exceed ``node_cap`` nodes.
    """
    if not h_target > 0:
        raise MeshError("h_target must be positive")
    e = domain.edges
    shortest = float(np.hypot(e[:, 0], e[:, 1]).min())
    h_dom = min(domain.diameter / 4, 4 * shortest)
    k = max(0, int(math.ceil(math.log2(h_dom / h_target)))) if h_dom > h_target else 0
    # rough estimate before doing any work: nodes ≈ 1.2·area/h² for quality meshes
    est = 1.2 * domain.area / (h_target * h_target) + domain.perimeter / h_target
    if est > 1.5 * node_cap:
        raise RefinementCapError(f"h = {h_target} needs about {int(est)} nodes (cap {node_cap})")
    mesh = _coarse(domain, h_target * 2 ** k)
    for _ in range(k):
        mesh = refine(mesh)
        if mesh.n_nodes > node_cap:
            raise RefinementCapError(f"refinement exceeded {node_cap} nodes at h = {h_target}")
    if mesh.n_nodes > node_cap:
        raise RefinementCapError(f"mesh has {mesh.n_nodes} nodes, cap {node_cap}")
    return mesh


def write_mesh(mesh: Mesh, path_or_buf) -> None:
    """Write the plain-text ``nodes / tris / bedges`` format at 17 digits."""
    buf = io.StringIO()
    buf.write(f"nodes {mesh.n_nodes}\n")
    for x, y in mesh.nodes:
        buf.write(f"{x:.17g} {y:.17g}\n")
    buf.write(f"tris {mesh.n_triangles}\n")
    for i, j, k in mesh.triangles:
        buf.write(f"{i} {j} {k}\n")
    buf.write(f"bedges {len(mesh.boundary_edges)}\n")
    for i, j in mesh.boundary_edges:
        buf.write(f"{i} {j}\n")
    text = buf.getvalue()
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        Path(path_or_buf).write_text(text)


def read_mesh(path_or_buf) -> Mesh:
    """Inverse of :func:`write_mesh`."""
    if hasattr(path_or_buf, "read"):
        text = path_or_buf.read()
    else:
        text = Path(path_or_buf).read_text()
    lines = iter(text.splitlines())

    def block(label, cols, dtype):
        head = next(lines).split()
        if len(head) != 2 or head[0] != label:
            raise MeshError(f"expected '{label} <count>', got {' '.join(head)!r}")
        count = int(head[1])
        rows = [next(lines).split() for _ in range(count)]
        if any(len(r) != cols for r in rows):
            raise MeshError(f"malformed row in {label} block")
        return np.array(rows, dtype=dtype).reshape(count, cols)

    try:
        nodes = block("nodes", 2, float)
        tris = block("tris", 3, np.int64)
        bed = block("bedges", 2, np.int64)
    except StopIteration as exc:
        raise MeshError("truncated mesh file") from exc
    return Mesh(nodes, tris, bed)
