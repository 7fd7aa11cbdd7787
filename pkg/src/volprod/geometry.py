"""Exact-tolerance polytope primitives in dimensions 2 and 3.

Everything is double precision with a single geometric tolerance TOL_GEOM,
relative to (1 + bounding-box diameter) wherever a length scale exists.
Polytopes are immutable: vertices in canonical order (2D counterclockwise
from the lexicographic minimum, 3D lexicographically sorted), facet data
precomputed at construction, merged supporting planes cached lazily under
a lock.  All operations are pure functions and safe to call concurrently
on shared instances.
"""

from __future__ import annotations

import itertools
import json
import threading

import numpy as np

from . import kernels
from .errors import (
    DegenerateInput,
    EmptyRegion,
    OriginNotInterior,
    SingularMatrix,
    UnboundedRegion,
    ZeroDirection,
)

TOL_GEOM = 1e-9
TOL_DET = 1e-12
_JOGGLE = 1e-13
_JOGGLE_SEEDS = (0x9E3779B97F4A7C15, 0xD1B54A32D192ED03, 0x94D049BB133111EB)
_JOG_TABLES: list[np.ndarray] = []


def _joggle_block(which: int, m: int) -> np.ndarray:
    """First m rows of the unit joggle table for retry seed `which`.

    Tables are filled lazily from fixed PCG64 streams; slicing a longer
    fill yields the same leading rows, so results do not depend on the
    table growth history."""
    while len(_JOG_TABLES) <= which:
        _JOG_TABLES.append(np.empty((0, 3)))
    tab = _JOG_TABLES[which]
    if len(tab) < m:
        size = max(4096, 2 * m)
        rng = np.random.Generator(np.random.PCG64(_JOGGLE_SEEDS[which]))
        tab = rng.random((size, 3)) * 2.0 - 1.0
        _JOG_TABLES[which] = tab
    return tab[:m]


class Halfspace:
    """Closed halfspace {x : <normal, x> <= offset}; normal need not be unit."""

    __slots__ = ("normal", "offset")

    def __init__(self, normal, offset):
        normal = np.asarray(normal, dtype=np.float64)
        if float(np.linalg.norm(normal)) == 0.0:
            raise ZeroDirection("halfspace normal is zero")
        normal.setflags(write=False)
        self.normal = normal
        self.offset = float(offset)

    def __repr__(self):
        return f"Halfspace({self.normal.tolist()}, {self.offset})"


class Polytope:
    """Full-dimensional convex polytope given by its extreme points.

    Build instances through convex_hull / halfspace_to_vertex; the raw
    constructor assumes canonicalized input.  `planes` holds one supporting
    plane per hull facet (per edge in 2D, per triangle in 3D) as rows
    (n..., off) meaning <n, x> <= off; coplanar triangles therefore repeat
    the same geometric plane, which gauge/membership tolerate.
    """

    __slots__ = ("dim", "vertices", "volume", "tris", "tript", "planes",
                 "gplanes", "scale", "_merged", "_lock")

    def __init__(self, dim, vertices, tris, planes, volume, scale, gplanes=None,
                 tript=None):
        self.dim = dim
        vertices.setflags(write=False)
        self.vertices = vertices
        if tris is not None:
            tris.setflags(write=False)
        self.tris = tris
        # the triangulated surface may reference tolerance-redundant points
        # that are filtered out of `vertices`; `tript` carries them
        if tript is None:
            tript = vertices
        tript.setflags(write=False)
        self.tript = tript
        planes.setflags(write=False)
        self.planes = planes
        # gauge/membership/polar work on the supporting planes whose normals
        # are large enough to be numerically reliable; sliver facets (from
        # the hull joggle) stay in `planes` for surface integrals only,
        # where their area weight cancels the normal noise
        if gplanes is None:
            gplanes = planes
        gplanes.setflags(write=False)
        self.gplanes = gplanes
        self.volume = volume
        self.scale = scale
        self._merged = None
        self._lock = threading.Lock()

    def __repr__(self):
        return (f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, "
                f"volume={self.volume:.6g})")

    def merged_planes(self):
        """(normals, offsets) with one row per geometric facet plane."""
        with self._lock:
            if self._merged is None:
                if self.dim == 2:
                    self._merged = (self.gplanes[:, :2], self.gplanes[:, 2])
                else:
                    self._merged = _merge_planes(self.gplanes, self.scale)
            return self._merged


def bbox_diameter(pts: np.ndarray) -> float:
    span = pts.max(axis=0) - pts.min(axis=0)
    return float(np.sqrt(np.sum(span * span)))


def _point_eps(pts: np.ndarray) -> float:
    return TOL_GEOM * (1.0 + bbox_diameter(pts))


def _sorted_unique(pts: np.ndarray, eps: float) -> np.ndarray:
    """Lexicographically sorted points with exact duplicates removed and
    points within eps of an earlier point merged away (window sweep on the
    first coordinate, fully vectorized)."""
    cols = tuple(pts[:, k] for k in range(pts.shape[1] - 1, -1, -1))
    spts = pts[np.lexsort(cols)]
    n = len(spts)
    if n < 2:
        return spts
    keep = np.empty(n, dtype=bool)
    keep[0] = True
    np.any(np.diff(spts, axis=0) != 0.0, axis=1, out=keep[1:])
    spts = spts[keep]
    n = len(spts)
    if n < 2:
        return spts
    x = spts[:, 0]
    win = np.searchsorted(x, x + eps, side="right") - np.arange(1, n + 1)
    wmax = int(win.max())
    if wmax <= 0:
        return spts
    drop = np.zeros(n, dtype=bool)
    e2 = eps * eps
    for k in range(1, wmax + 1):
        idx = np.flatnonzero(win[: n - k] >= k)
        if len(idx) == 0:
            break
        d = spts[idx + k] - spts[idx]
        near = np.sum(d * d, axis=1) <= e2
        drop[idx[near] + k] = True
    if not drop.any():
        return spts
    return spts[~drop]


def convex_hull(points, dim: int) -> Polytope:
    """Convex hull of the input points as a canonical Polytope.

    Raises DegenerateInput when the points are affinely dependent at
    tolerance (collinear in 2D, coplanar in 3D) or too few.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise ValueError(f"expected (m, {dim}) points, got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    if pts.shape[0] < dim + 1:
        raise DegenerateInput(f"need at least {dim + 1} points")
    scale = 1.0 + bbox_diameter(pts)
    eps = TOL_GEOM * scale
    spts = _sorted_unique(pts, eps)
    if dim == 2:
        idx = kernels.hull2d(spts)
        if len(idx) < 3:
            raise DegenerateInput("points are collinear")
        verts = spts[idx]
        if abs(polygon_area(verts)) <= (eps * scale):
            raise DegenerateInput("points are collinear at tolerance")
        return _build_2d(verts, scale)
    # the hull combinatorics is computed on deterministically joggled
    # coordinates (amplitude far below TOL_GEOM), which puts the points in
    # general position for the kernel's exact orientation predicates; the
    # degeneracy test still sees the raw points
    for which in range(len(_JOGGLE_SEEDS)):
        jpts = spts + _joggle_block(which, len(spts)) * (_JOGGLE * scale)
        try:
            res = kernels.hull3d(spts, jpts, eps)
            break
        except RuntimeError:
            continue
    else:
        raise DegenerateInput("hull construction failed at all joggle seeds")
    if res is None:
        raise DegenerateInput("points are coplanar")
    tris, tplanes = res
    return _build_3d(jpts, tris, tplanes, scale)


_ANG_TOL = 1e-7  # sub-tolerance corners are not listed as vertices


def _build_2d(verts: np.ndarray, scale: float) -> Polytope:
    # drop vertices whose corner turn is below the angular tolerance (the
    # hull chain is exact, so projections of joggled 3D bodies may carry
    # near-collinear points); the polygon stays convex and loses only
    # sub-tolerance sliver area
    while len(verts) > 3:
        e_in = verts - np.roll(verts, 1, axis=0)
        e_out = np.roll(verts, -1, axis=0) - verts
        cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
        li = np.sqrt(np.sum(e_in * e_in, axis=1))
        lo = np.sqrt(np.sum(e_out * e_out, axis=1))
        sharp = cross > _ANG_TOL * (li * lo)
        if sharp.all():
            break
        verts = np.ascontiguousarray(verts[sharp])
    edges = np.roll(verts, -1, axis=0) - verts
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
    offsets = normals[:, 0] * verts[:, 0] + normals[:, 1] * verts[:, 1]
    planes = np.concatenate([normals, offsets[:, None]], axis=1)
    area = polygon_area(verts)
    return Polytope(2, verts, None, planes, area, scale)


def _build_3d(pts, tris, tplanes, scale) -> Polytope:
    ids = np.unique(tris)
    allpts = pts[ids]
    order = np.lexsort((allpts[:, 2], allpts[:, 1], allpts[:, 0]))
    ids = ids[order]
    allpts = pts[ids].copy()
    remap = np.full(int(ids.max()) + 1, -1, dtype=np.int64)
    remap[ids] = np.arange(len(ids))
    rtris = remap[tris]
    # canonical facet order: rotate min index first, then sort rows
    shift = np.argmin(rtris, axis=1)
    rows = np.arange(len(rtris))[:, None]
    cols = (shift[:, None] + np.arange(3)) % 3
    rtris = rtris[rows, cols]
    order = np.lexsort((rtris[:, 2], rtris[:, 1], rtris[:, 0]))
    rtris = np.ascontiguousarray(rtris[order])
    planes = np.ascontiguousarray(tplanes[order])
    vol = volume_from_tris(allpts, rtris)
    norms2 = np.sum(planes[:, :3] * planes[:, :3], axis=1)
    # drop only facets at the joggle-sliver scale (their normals carry no
    # geometric information); every genuinely supporting plane, however
    # small its facet, must stay or the polar bulges at sharp corners
    solid = norms2 > (1e-9 * scale * scale) ** 2
    gplanes = np.ascontiguousarray(planes[solid]) if solid.any() else planes
    verts = allpts[_real_vertex_mask(allpts, rtris, planes, solid)]
    return Polytope(3, verts, rtris, planes, vol, scale, gplanes, allpts)


def _real_vertex_mask(allpts, tris, planes, solid):
    """True for points that are corners of the hull at tolerance.

    Joggled hulls can keep points that sit on a facet or edge of the true
    hull; their incident facet normals have a rank-deficient spread, so the
    smallest eigenvalue of the unit-normal second-moment matrix tells a
    genuine corner (full 3D spread) from a face or edge interior point.
    """
    nv = len(allpts)
    st = tris[solid]
    if len(st) == 0:
        return np.ones(nv, dtype=bool)
    n = planes[solid, :3]
    nhat = n / np.sqrt(np.sum(n * n, axis=1))[:, None]
    idx = st.ravel()
    moments = np.zeros((nv, 3, 3))
    counts = np.bincount(idx, minlength=nv).astype(float)
    for i in range(3):
        for j in range(i, 3):
            w = np.repeat(nhat[:, i] * nhat[:, j], 3)
            m = np.bincount(idx, weights=w, minlength=nv)
            moments[:, i, j] = m
            moments[:, j, i] = m
    touched = counts > 0
    lam = np.zeros(nv)
    lam[touched] = np.linalg.eigvalsh(moments[touched])[:, 0]
    real = touched & (lam > (_ANG_TOL**2) * np.maximum(counts, 1.0))
    if real.sum() < 4:
        return np.ones(nv, dtype=bool)
    return real


def polygon_area(verts: np.ndarray) -> float:
    x = verts[:, 0]
    y = verts[:, 1]
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - xn * y))


def volume_from_tris(verts: np.ndarray, tris: np.ndarray) -> float:
    g = verts.mean(axis=0)
    a = verts[tris[:, 0]] - g
    b = verts[tris[:, 1]] - g
    c = verts[tris[:, 2]] - g
    dets = (
        a[:, 0] * (b[:, 1] * c[:, 2] - b[:, 2] * c[:, 1])
        - a[:, 1] * (b[:, 0] * c[:, 2] - b[:, 2] * c[:, 0])
        + a[:, 2] * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    )
    return float(np.sum(dets)) / 6.0


def volume(P: Polytope) -> float:
    """Lebesgue measure of P (area when dim == 2)."""
    return P.volume


def _merge_planes(planes: np.ndarray, scale: float):
    """Group near-identical plane rows (n, off) and return area-weighted
    representative (normals, offsets) per geometric facet."""
    norms = np.sqrt(np.sum(planes[:, :3] * planes[:, :3], axis=1))
    unit = planes / norms[:, None]
    unit[:, 3] /= scale  # offsets compared relative to body scale
    tol = 1e-7
    order = np.lexsort((unit[:, 3], unit[:, 2], unit[:, 1], unit[:, 0]))
    su = unit[order]
    n = len(su)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if su[j, 0] - su[i, 0] > tol:
                break
            if np.max(np.abs(su[j] - su[i])) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    normals = []
    offsets = []
    for root in sorted(groups):
        rows = order[groups[root]]
        w = norms[rows]
        nvec = np.sum(planes[rows, :3] * 1.0, axis=0)
        nlen = float(np.linalg.norm(nvec))
        nhat = nvec / nlen
        off = float(np.sum(w * (planes[rows, 3] / norms[rows])) / np.sum(w))
        normals.append(nhat)
        offsets.append(off)
    normals = np.asarray(normals)
    offsets = np.asarray(offsets)
    normals.setflags(write=False)
    offsets.setflags(write=False)
    return normals, offsets


def vertex_to_halfspace(P: Polytope) -> list[Halfspace]:
    """Supporting halfspaces of P, one per geometric facet."""
    normals, offsets = P.merged_planes()
    return [Halfspace(n, c) for n, c in zip(normals, offsets)]


def halfspace_to_vertex(halfspaces, dim: int) -> Polytope:
    """Vertex enumeration of an intersection of halfspaces.

    Accepts Halfspace objects or (normal, offset) pairs.  Raises
    UnboundedRegion when the normals fail to span positively and
    EmptyRegion when the intersection has no feasible vertex.
    """
    normals = []
    offsets = []
    for h in halfspaces:
        if isinstance(h, Halfspace):
            normals.append(h.normal)
            offsets.append(h.offset)
        else:
            normals.append(np.asarray(h[0], dtype=np.float64))
            offsets.append(float(h[1]))
    A = np.asarray(normals, dtype=np.float64).reshape(-1, dim)
    b = np.asarray(offsets, dtype=np.float64)
    lens = np.sqrt(np.sum(A * A, axis=1))
    if np.any(lens == 0.0):
        raise ZeroDirection("halfspace normal is zero")
    _require_bounded(A / lens[:, None], dim)
    cand = _vertex_candidates(A, b, dim)
    if len(cand) == 0:
        raise EmptyRegion("no feasible intersection point")
    cand = cand[np.isfinite(cand).all(axis=1)]
    mag = 1.0 + np.sqrt(np.sum(cand * cand, axis=1))
    feas = np.all((cand @ A.T - b) / lens <= TOL_GEOM * mag[:, None], axis=1)
    cand = cand[feas]
    if len(cand) < dim + 1:
        raise EmptyRegion("no feasible intersection point")
    return convex_hull(cand, dim)


def _require_bounded(unit_normals: np.ndarray, dim: int) -> None:
    # bounded iff the unit normals span positively, i.e. the origin is
    # strictly inside their convex hull
    try:
        hull = convex_hull(unit_normals, dim)
    except DegenerateInput:
        raise UnboundedRegion("halfspace normals do not span") from None
    pn = hull.planes[:, :dim]
    po = hull.planes[:, dim]
    plen = np.sqrt(np.sum(pn * pn, axis=1))
    if np.min(po / plen) <= 10.0 * TOL_GEOM:
        raise UnboundedRegion("halfspace normals do not span positively")


def _vertex_candidates(A, b, dim):
    m = len(A)
    if m < dim:
        return np.empty((0, dim))
    combos = np.asarray(list(itertools.combinations(range(m), dim)), dtype=np.int64)
    M = A[combos]  # (k, dim, dim)
    rhs = b[combos]
    if dim == 2:
        det = M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
        ok = np.abs(det) > TOL_DET
        M, rhs, det = M[ok], rhs[ok], det[ok]
        x = (rhs[:, 0] * M[:, 1, 1] - rhs[:, 1] * M[:, 0, 1]) / det
        y = (M[:, 0, 0] * rhs[:, 1] - M[:, 1, 0] * rhs[:, 0]) / det
        return np.stack([x, y], axis=1)
    det = (
        M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
        - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
        + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0])
    )
    ok = np.abs(det) > TOL_DET
    M, rhs, det = M[ok], rhs[ok], det[ok]
    sol = np.linalg.solve(M, rhs[:, :, None])[:, :, 0] if len(M) else np.empty((0, 3))
    return sol


def support_value(P: Polytope, u) -> float:
    """max_{v in P} <u, v>."""
    u = _direction(u, P.dim)
    return float(np.max(P.vertices @ u))


def support_point(P: Polytope, u) -> np.ndarray:
    """A vertex attaining the support value (first in canonical order)."""
    u = _direction(u, P.dim)
    dots = P.vertices @ u
    return P.vertices[int(np.argmax(dots))].copy()


def _direction(u, dim):
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (dim,):
        raise ValueError(f"direction must have shape ({dim},)")
    if float(np.linalg.norm(u)) < 1e-15:
        raise ZeroDirection("zero direction")
    return u


def _interior_offsets(P: Polytope):
    n = P.gplanes[:, : P.dim]
    off = P.gplanes[:, P.dim]
    lens = np.sqrt(np.sum(n * n, axis=1))
    if np.min(off / lens) <= TOL_GEOM * P.scale:
        raise OriginNotInterior("origin is not strictly inside the body")
    return n, off


def gauge(P: Polytope, x) -> float:
    """Minkowski functional: least t >= 0 with x in t*P (origin interior)."""
    n, off = _interior_offsets(P)
    x = np.asarray(x, dtype=np.float64)
    val = float(np.max((n @ x) / off))
    return max(val, 0.0)


def gauge_many(P: Polytope, X: np.ndarray) -> np.ndarray:
    """Vectorized gauge over rows of X."""
    n, off = _interior_offsets(P)
    return np.maximum(np.max((X @ n.T) / off, axis=1), 0.0)


def contains(P: Polytope, x, tol: float = TOL_GEOM) -> bool:
    """True iff every facet constraint holds within tol (normalized)."""
    x = np.asarray(x, dtype=np.float64)
    n = P.gplanes[:, : P.dim]
    off = P.gplanes[:, P.dim]
    lens = np.sqrt(np.sum(n * n, axis=1))
    return bool(np.all(n @ x - off <= tol * P.scale * lens))


def contains_many(P: Polytope, X: np.ndarray, tol: float = TOL_GEOM) -> np.ndarray:
    n = P.gplanes[:, : P.dim]
    off = P.gplanes[:, P.dim]
    lens = np.sqrt(np.sum(n * n, axis=1))
    return np.all(X @ n.T - off <= tol * P.scale * lens, axis=1)


def apply_linear(P: Polytope, M) -> Polytope:
    """Image of P under an invertible linear map (|det M| > TOL_DET)."""
    M = np.asarray(M, dtype=np.float64)
    if M.shape != (P.dim, P.dim):
        raise ValueError(f"matrix must be {P.dim}x{P.dim}")
    if abs(float(np.linalg.det(M))) <= TOL_DET:
        raise SingularMatrix("matrix determinant below tolerance")
    return convex_hull(P.vertices @ M.T, P.dim)


def same_vertex_set(P: Polytope, Q: Polytope, tol: float = 1e-7) -> bool:
    """True iff the two polytopes have the same vertices within tol
    (closest-pair-first nearest-neighbor matching, scale-relative)."""
    if P.dim != Q.dim or len(P.vertices) != len(Q.vertices):
        return False
    from .symmetry import _match_sets

    thresh = tol * max(P.scale, Q.scale)
    return _match_sets(P.vertices, Q.vertices, thresh)


def load_body(path) -> Polytope:
    """Read a body file: {"dim": 2|3, "vertices": [[x, y(, z)], ...]}.

    Vertices need not be extreme; the hull is taken on load.
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return body_from_dict(data)


def body_from_dict(data) -> Polytope:
    dim = int(data["dim"])
    verts = np.asarray(data["vertices"], dtype=np.float64)
    return convex_hull(verts, dim)


def body_to_dict(P: Polytope) -> dict:
    return {"dim": P.dim, "vertices": [list(map(float, v)) for v in P.vertices]}


def dump_body(P: Polytope, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(body_to_dict(P), fh)
        fh.write("\n")
