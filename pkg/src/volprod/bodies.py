"""Body-level constructions: difference body, polar dual, projections,
central sections, planar Steiner symmetrization, and the volume product
|K| |(K-K)deg| that everything else certifies and minimizes.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptyRegion
from .geometry import (
    TOL_GEOM,
    Polytope,
    _direction,
    _interior_offsets,
    _vertex_candidates,
    convex_hull,
    polygon_area,
)


class PlaneBasis:
    """Deterministic orthonormal frame (e1, e2) of the plane orthogonal to u.

    e1 = normalize(u x a) for the first coordinate axis a not parallel to u;
    e2 = normalize(u x e1), which makes (e1, e2, u/|u|) right-handed.
    """

    __slots__ = ("u", "e1", "e2")

    def __init__(self, u):
        u = _direction(u, 3).copy()
        uhat = u / np.linalg.norm(u)
        axis = None
        for a in (np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0])):
            if np.linalg.norm(np.cross(uhat, a)) > 1e-6:
                axis = a
                break
        c1 = np.cross(u, axis)
        e1 = c1 / np.linalg.norm(c1)
        c2 = np.cross(u, e1)
        e2 = c2 / np.linalg.norm(c2)
        for v in (u, e1, e2):
            v.setflags(write=False)
        self.u = u
        self.e1 = e1
        self.e2 = e2

    def to_plane(self, coords2d: np.ndarray) -> np.ndarray:
        """Map (m, 2) section coordinates back into 3-space."""
        return np.outer(coords2d[:, 0], self.e1) + np.outer(coords2d[:, 1], self.e2)


def difference_body(K: Polytope) -> Polytope:
    """K - K, the hull of all pairwise vertex differences.

    Always centrally symmetric with the origin in its interior.
    """
    V = K.vertices
    diffs = (V[:, None, :] - V[None, :, :]).reshape(-1, K.dim)
    return convex_hull(diffs, K.dim)


def polar(K: Polytope) -> Polytope:
    """Polar body {x : <y, x> <= 1 for all y in K}; needs interior origin.

    Vertices of the polar are the facet planes of K scaled to offset 1, so
    no halfspace intersection is required.
    """
    n, off = _interior_offsets(K)
    return convex_hull(n / off[:, None], K.dim)


def translate(K: Polytope, t) -> Polytope:
    """K + t without re-hulling (canonical order survives translation)."""
    t = np.asarray(t, dtype=np.float64)
    verts = K.vertices + t
    planes = K.planes.copy()
    planes[:, K.dim] += planes[:, : K.dim] @ t
    if K.gplanes is K.planes:
        gplanes = None
    else:
        gplanes = K.gplanes.copy()
        gplanes[:, K.dim] += gplanes[:, : K.dim] @ t
    tris = None if K.tris is None else K.tris.copy()
    tript = None if K.tript is K.vertices else K.tript + t
    return Polytope(K.dim, verts, tris, planes, K.volume, K.scale, gplanes, tript)


def project(K: Polytope, basis: PlaneBasis) -> Polytope:
    """Orthogonal projection of a 3D body onto u-perp, in (e1, e2) coords."""
    if K.dim != 3:
        raise ValueError("project expects a 3D body")
    coords = np.stack([K.vertices @ basis.e1, K.vertices @ basis.e2], axis=1)
    return convex_hull(coords, 2)


def central_section(K: Polytope, basis: PlaneBasis) -> Polytope:
    """K intersected with the plane u-perp through the origin, as a polygon
    in (e1, e2) coordinates.  Requires the origin inside K."""
    if K.dim != 3:
        raise ValueError("central_section expects a 3D body")
    _interior_offsets(K)
    normals, offsets = K.merged_planes()
    A = np.stack([normals @ basis.e1, normals @ basis.e2], axis=1)
    return _halfplane_polygon(A, offsets)


def _halfplane_polygon(A: np.ndarray, b: np.ndarray) -> Polytope:
    """Bounded intersection of 2D halfplanes {A x <= b} (b > 0 interior)."""
    cand = _vertex_candidates(A, b, 2)
    if len(cand) == 0:
        raise EmptyRegion("halfplane system has no corner")
    lens = np.sqrt(np.sum(A * A, axis=1))
    cand = cand[np.isfinite(cand).all(axis=1)]
    # tolerance relative to each candidate's own magnitude, so spurious
    # far-away intersections of near-parallel lines cannot pass
    mag = 1.0 + np.sqrt(np.sum(cand * cand, axis=1))
    feas = np.all((cand @ A.T - b) / lens <= TOL_GEOM * mag[:, None], axis=1)
    cand = cand[feas]
    if len(cand) < 3:
        raise EmptyRegion("halfplane system is empty or degenerate")
    return convex_hull(cand, 2)


def steiner_symmetrize_2d(P: Polytope, direction) -> Polytope:
    """Steiner symmetrization of a polygon: every chord parallel to
    `direction` is recentered on the line through the origin orthogonal to
    it.  Preserves area and convexity."""
    if P.dim != 2:
        raise ValueError("steiner_symmetrize_2d expects a 2D body")
    d = _direction(direction, 2)
    dhat = d / np.linalg.norm(d)
    perp = np.array([-dhat[1], dhat[0]])
    s = P.vertices @ perp
    t = P.vertices @ dhat
    breaks = np.unique(s)
    pts = []
    m = len(s)
    for sv in breaks:
        ts = []
        for i in range(m):
            j = (i + 1) % m
            si, sj = s[i], s[j]
            if si == sv:
                ts.append(t[i])
            if (si < sv < sj) or (sj < sv < si):
                ts.append(t[i] + (t[j] - t[i]) * ((sv - si) / (sj - si)))
        half = (max(ts) - min(ts)) / 2.0
        pts.append((sv, half))
        pts.append((sv, -half))
    pts = np.asarray(pts)
    world = np.outer(pts[:, 0], perp) + np.outer(pts[:, 1], dhat)
    return convex_hull(world, 2)


def volume_product(K: Polytope) -> float:
    """|K| * |(K - K)deg|, the quantity bounded below by (n+1)/n!."""
    return K.volume * polar(difference_body(K)).volume


def makai_floor(dim: int) -> float:
    """Conjectured sharp lower bound (n+1)/n! for the volume product."""
    import math

    return (dim + 1) / math.factorial(dim)


def clip_polygon(verts: np.ndarray, normal, offset: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex CCW polygon by {<n, x> <= off}."""
    n = np.asarray(normal, dtype=np.float64)
    m = len(verts)
    d = verts @ n - offset
    out = []
    for i in range(m):
        j = (i + 1) % m
        if d[i] <= 0.0:
            out.append(verts[i])
        if (d[i] < 0.0 < d[j]) or (d[j] < 0.0 < d[i]):
            frac = d[i] / (d[i] - d[j])
            out.append(verts[i] + frac * (verts[j] - verts[i]))
    return np.asarray(out).reshape(-1, 2)


def convex_polygon_intersection_area(P: Polytope, Q: Polytope) -> float:
    """Area of the intersection of two convex polygons."""
    verts = P.vertices
    for k in range(len(Q.planes)):
        if len(verts) < 3:
            return 0.0
        verts = clip_polygon(verts, Q.planes[k, :2], Q.planes[k, 2])
    if len(verts) < 3:
        return 0.0
    return abs(polygon_area(verts))


def _clip_poly_3d(poly: np.ndarray, n: np.ndarray, off: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a planar polygon embedded in 3-space by
    the halfspace {<n, x> <= off}."""
    m = len(poly)
    d = poly @ n - off
    out = []
    for i in range(m):
        j = (i + 1) % m
        if d[i] <= 0.0:
            out.append(poly[i])
        if (d[i] < 0.0 < d[j]) or (d[j] < 0.0 < d[i]):
            frac = d[i] / (d[i] - d[j])
            out.append(poly[i] + frac * (poly[j] - poly[i]))
    return np.asarray(out).reshape(-1, 3)


def _poly_area_along(poly: np.ndarray, nhat: np.ndarray) -> float:
    """Signed area of a planar polygon in 3-space with unit normal nhat."""
    cr = np.cross(poly, np.roll(poly, -1, axis=0))
    return 0.5 * float(nhat @ np.sum(cr, axis=0))


def cone_volume(P: Polytope, cone_normals) -> float:
    """Volume of P intersected with the cone {<c, x> >= 0 for c in
    cone_normals} (apex at the origin, origin inside P).

    By the divergence theorem the cone's own facets (planes through the
    origin) contribute nothing, so the volume is (1/3) sum over boundary
    facets of plane-distance times the area of facet-cap-cone.  Pure
    surface clipping: no hulls, no tolerance decisions.
    """
    C = np.asarray(cone_normals, dtype=np.float64)
    V = P.tript
    tris = P.tris
    n = P.planes[:, :3]
    off = P.planes[:, 3]
    nlen = np.sqrt(np.sum(n * n, axis=1))
    # vertex-vs-cone classification, vectorized over triangles
    vd = V @ C.T  # (nv, ncone); keep region is vd >= 0
    tmin = np.min(vd[tris], axis=1)  # (F, ncone)
    tmax = np.max(vd[tris], axis=1)
    fully_in = np.all(tmin >= 0.0, axis=1)
    fully_out = np.any(tmax <= 0.0, axis=1)
    total = 0.0
    areas = 0.5 * nlen
    total += float(np.sum((off[fully_in] / nlen[fully_in]) * areas[fully_in]))
    for f in np.flatnonzero(~fully_in & ~fully_out):
        poly = V[tris[f]]
        for c in C:
            poly = _clip_poly_3d(poly, -c, 0.0)
            if len(poly) < 3:
                break
        else:
            nhat = n[f] / nlen[f]
            total += (off[f] / nlen[f]) * _poly_area_along(poly, nhat)
    return total / 3.0
