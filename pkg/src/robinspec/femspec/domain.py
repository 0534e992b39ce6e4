"""Polygonal domains in the plane."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, GeometryError

__all__ = ["PolygonDomain", "make_domain", "parse_domain"]


def _segments_cross(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(p3, p4, p1), orient(p3, p4, p2)
    d3, d4 = orient(p1, p2, p3), orient(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 and d2 and d3 and d4:
        return True

    def on_seg(a, b, c, d):
        return d == 0 and min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and \
            min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return on_seg(p3, p4, p1, d1) or on_seg(p3, p4, p2, d2) or \
        on_seg(p1, p2, p3, d3) or on_seg(p1, p2, p4, d4)


def _check_simple(v: np.ndarray) -> None:
    m = len(v)
    if m < 3:
        raise GeometryError("a polygon needs at least 3 vertices")
    e = np.roll(v, -1, axis=0) - v
    if np.any(np.hypot(e[:, 0], e[:, 1]) == 0):
        raise GeometryError("repeated consecutive vertex")
    if m > 64:
        # sweep over x-sorted edge boxes keeps this near linear for convex m-gons
        lo = np.minimum(v[:, 0], np.roll(v[:, 0], -1))
        hi = np.maximum(v[:, 0], np.roll(v[:, 0], -1))
        order = np.argsort(lo)
        active: list[int] = []
        for i in order:
            active = [j for j in active if hi[j] >= lo[i]]
            for j in active:
                if abs(i - j) in (1, m - 1):
                    continue
                if _segments_cross(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]):
                    raise GeometryError(f"edges {i} and {j} intersect")
            active.append(i)
        return
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if _segments_cross(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]):
                raise GeometryError(f"edges {i} and {j} intersect")


@dataclass(frozen=True)
class PolygonDomain:
    """Simple counterclockwise polygon with cached geometric quantities.

    Parameters
    ----------
    vertices : (m, 2) array_like
        Vertices in order.  Clockwise input is rejected rather than silently
        reversed, so descriptors stay unambiguous.
    name : str
        Descriptor used in reports and cache keys.
    m : int, optional
        Boundary resolution for polygonal approximations of curved shapes;
        ``None`` for genuinely polygonal domains.
    """

    vertices: np.ndarray = field(repr=False)
    name: str = "custom"
    m: int | None = None

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or not np.all(np.isfinite(v)):
            raise GeometryError("vertices must be a finite (m, 2) array")
        if len(v) > 1 and np.array_equal(v[0], v[-1]):
            v = v[:-1]
        _check_simple(v)
        x, y = v[:, 0], v[:, 1]
        xs, ys = np.roll(x, -1), np.roll(y, -1)
        cross = x * ys - xs * y
        area = 0.5 * cross.sum()
        if area <= 0:
            if area == 0:
                raise GeometryError("degenerate polygon with zero area")
            raise GeometryError("vertices must be ordered counterclockwise")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "_area", float(area))
        cx = float(((x + xs) * cross).sum() / (6 * area))
        cy = float(((y + ys) * cross).sum() / (6 * area))
        object.__setattr__(self, "_centroid", (cx, cy))

    def __hash__(self):
        return hash((self.name, self.m, self.vertices.tobytes()))

    def __eq__(self, other):
        if not isinstance(other, PolygonDomain):
            return NotImplemented
        return (self.name, self.m) == (other.name, other.m) and \
            np.array_equal(self.vertices, other.vertices)

    @property
    def area(self) -> float:
        return self._area

    @property
    def centroid(self) -> tuple[float, float]:
        return self._centroid

    @property
    def edges(self) -> np.ndarray:
        """Edge vectors ``v_{i+1} - v_i``."""
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @property
    def perimeter(self) -> float:
        e = self.edges
        return float(np.hypot(e[:, 0], e[:, 1]).sum())

    @property
    def convex(self) -> bool:
        e = self.edges
        turn = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        scale = np.max(np.abs(self.vertices)) ** 2
        return bool(np.all(turn >= -1e-14 * scale))

    @property
    def diameter(self) -> float:
        v = self.vertices
        if len(v) > 2000:
            from scipy.spatial import ConvexHull
            v = v[ConvexHull(v).vertices]
        d = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())

    @property
    def p0(self) -> float:
        """``max x·ν`` over the boundary with the centroid moved to the origin.

        On each edge ``x·ν`` is constant, so this is a max over edges.
        """
        e = self.edges
        length = np.hypot(e[:, 0], e[:, 1])
        nx, ny = e[:, 1] / length, -e[:, 0] / length
        cx, cy = self.centroid
        return float(np.max((self.vertices[:, 0] - cx) * nx + (self.vertices[:, 1] - cy) * ny))

    @property
    def curvature_term(self) -> float:
        """``1/m`` for polygonal approximations of curved shapes, else 0."""
        return 0.0 if self.m is None else 1.0 / self.m

    def translated(self, shift) -> "PolygonDomain":
        sx, sy = map(float, shift)
        return PolygonDomain(self.vertices + np.array([sx, sy]),
                             f"{self.name}+({sx:g},{sy:g})", self.m)


def _ngon(m, a, b):
    theta = 2 * np.pi * np.arange(m) / m
    return np.column_stack([a * np.cos(theta), b * np.sin(theta)])


def make_domain(kind: str, *args, m: int = 512, vertices=None) -> PolygonDomain:
    """Build one of the standard test domains, centred at the origin.

    Parameters
    ----------
    kind : {"disk", "ellipse", "rectangle", "square", "lshape", "custom"}
        ``disk`` takes an optional radius (default 1); ``ellipse`` the two
        semi-axes; ``rectangle`` the side lengths.
    m : int
        Vertex count for the inscribed polygons of disks and ellipses.
    vertices : array_like, optional
        Counterclockwise vertex list for ``custom``.

    Examples
    --------
    >>> make_domain("rectangle", 1, 2).area
    2.0
    """
    kind = kind.lower()
    if kind in ("disk", "ellipse"):
        if int(m) != m or m < 16:
            raise DomainError(f"curved shapes need m >= 16 boundary vertices, got {m}")
        m = int(m)
        if kind == "disk":
            radius = float(args[0]) if args else 1.0
            if not radius > 0:
                raise DomainError("radius must be positive")
            name = f"disk(m={m})" if radius == 1 else f"disk({radius:g},m={m})"
            return PolygonDomain(_ngon(m, radius, radius), name, m)
        if len(args) != 2:
            raise DomainError("ellipse needs two semi-axes")
        a, b = map(float, args)
        if not (a > 0 and b > 0):
            raise DomainError("semi-axes must be positive")
        return PolygonDomain(_ngon(m, a, b), f"ellipse({a:g},{b:g},m={m})", m)
    if kind in ("rectangle", "square"):
        if kind == "square":
            a = b = float(args[0]) if args else 1.0
        else:
            if len(args) != 2:
                raise DomainError("rectangle needs two side lengths")
            a, b = map(float, args)
        if not (a > 0 and b > 0):
            raise DomainError("side lengths must be positive")
        v = [(-a / 2, -b / 2), (a / 2, -b / 2), (a / 2, b / 2), (-a / 2, b / 2)]
        name = "square" if kind == "square" and a == 1 else f"rectangle({a:g},{b:g})"
        return PolygonDomain(v, name)
    if kind == "lshape":
        v = [(-1, -1), (1, -1), (1, 0), (0, 0), (0, 1), (-1, 1)]
        return PolygonDomain(v, "lshape")
    if kind == "custom":
        if vertices is None:
            raise DomainError("custom domains need a vertex list")
        return PolygonDomain(vertices, "custom")
    raise DomainError(f"unknown domain kind {kind!r}")


_DESCRIPTOR = re.compile(r"^\s*([a-zA-Z_]+)\s*(?:\(([^)]*)\))?\s*$")


def parse_domain(spec, m: int = 512) -> PolygonDomain:
    """Domain from a descriptor such as ``"rectangle(1,2)"`` or ``"disk"``.

    A mapping ``{"kind": "custom", "vertices": [...], "name": ...}`` is also
    accepted.
    """
    if isinstance(spec, PolygonDomain):
        return spec
    if isinstance(spec, dict):
        spec = dict(spec)
        kind = spec.pop("kind", "custom")
        if kind != "custom":
            raise DomainError("mapping descriptors are only for custom polygons")
        name = spec.pop("name", "custom")
        verts = spec.pop("vertices", None)
        if spec:
            raise DomainError(f"unknown custom-domain keys {sorted(spec)}")
        if verts is None:
            raise DomainError("custom domains need a vertex list")
        return PolygonDomain(verts, str(name))
    match = _DESCRIPTOR.match(str(spec))
    if not match:
        raise DomainError(f"cannot parse domain descriptor {spec!r}")
    kind, arglist = match.groups()
    args = []
    for tok in (arglist or "").split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.startswith("m="):
            m = int(tok[2:])
        else:
            args.append(float(tok))
    return make_domain(kind, *args, m=m)
