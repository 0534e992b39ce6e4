"""Finite-element spectra on planar polygons and the associated radii."""

from .domain import PolygonDomain, make_domain, parse_domain
from .mesh import DEFAULT_NODE_CAP, Mesh, read_mesh, refine, triangulate, write_mesh
from .solver import (
    RadiiReport,
    SpectralPair,
    assemble,
    boundary_max,
    radii,
    robin_spectrum,
    solve_on_mesh,
    superlevel_volume,
    triangle_superlevel_areas,
)

__all__ = [
    "PolygonDomain", "make_domain", "parse_domain",
    "Mesh", "triangulate", "refine", "read_mesh", "write_mesh", "DEFAULT_NODE_CAP",
    "SpectralPair", "RadiiReport", "assemble", "robin_spectrum", "solve_on_mesh",
    "boundary_max", "superlevel_volume", "triangle_superlevel_areas", "radii",
]
