"""Named reference bodies used across tests, docs, and the CLI examples."""

from __future__ import annotations

import math

import numpy as np

from .geometry import Polytope, convex_hull
from .symmetry import REFERENCE_TETRAHEDRON


def triangle() -> Polytope:
    """T0 = conv{(0,0), (1,0), (0,1)}; attains the planar bound 3/2."""
    return convex_hull([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], 2)


def square() -> Polytope:
    """[-1, 1]^2."""
    return convex_hull([(-1, -1), (1, -1), (1, 1), (-1, 1)], 2)


def regular_polygon(n: int, radius: float = 1.0) -> Polytope:
    k = np.arange(n)
    ang = 2.0 * math.pi * k / n
    return convex_hull(np.stack([radius * np.cos(ang), radius * np.sin(ang)], axis=1), 2)


def tetrahedron() -> Polytope:
    """The reference tetrahedron conv{(1,1,-1),(1,-1,1),(-1,1,1),(-1,-1,-1)};
    attains the tetrahedrally symmetric 3D bound 2/3."""
    return convex_hull(REFERENCE_TETRAHEDRON, 3)


def cube() -> Polytope:
    """[-1, 1]^3."""
    pts = [(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
    return convex_hull(pts, 3)


def octahedron(radius: float = 1.0) -> Polytope:
    pts = np.concatenate([radius * np.eye(3), -radius * np.eye(3)])
    return convex_hull(pts, 3)
