"""Pure-Python convex hull kernels (fallback backend).

volprod._kernels_cy mirrors these two routines operation for operation.
Both backends must return bit-identical results: the arithmetic below is
written with a fixed association order, the extension is compiled with
-ffp-contract=off, ties in argmax scans resolve to the first maximum in
both implementations, and inconclusive orientation signs fall back to the
same exact-rational routine.  Anything that is not a hot inner loop
(volumes, gauges, clipping, sampling) lives in shared numpy code instead.
"""

from __future__ import annotations

import numpy as np

from ._exact import above_sign, turn_sign

BACKEND = "python"

# Shewchuk-style static filter bounds for the orientation determinants
_EPSM = np.finfo(np.float64).eps / 2.0  # 2^-53
_FILTER = (7.0 + 56.0 * _EPSM) * _EPSM
_FILTER2 = (3.0 + 16.0 * _EPSM) * _EPSM


def _turn(x, y, j, k, i) -> int:
    """Exact sign of the turn j -> k -> i (float filter, rational fallback)."""
    det = (x[k] - x[j]) * (y[i] - y[j]) - (y[k] - y[j]) * (x[i] - x[j])
    bound = _FILTER2 * (
        abs((x[k] - x[j]) * (y[i] - y[j])) + abs((y[k] - y[j]) * (x[i] - x[j]))
    )
    if det > bound:
        return 1
    if -det > bound:
        return -1
    if bound == 0.0:
        return 0
    return turn_sign(x[j], y[j], x[k], y[k], x[i], y[i])


def hull2d(pts: np.ndarray) -> np.ndarray:
    """Convex hull of lexicographically sorted, deduplicated 2D points.

    Monotone-chain sweep with exact orientation signs: a chain point is
    popped unless it makes a strictly counterclockwise turn, so exactly
    collinear middle points are dropped and nothing else.  Returns int64
    indices into ``pts``, counterclockwise, starting at ``pts[0]`` (the
    lexicographic minimum).  An empty array signals degenerate (collinear)
    input.
    """
    n = pts.shape[0]
    x = pts[:, 0]
    y = pts[:, 1]
    lower: list[int] = []
    for i in range(n):
        while len(lower) > 1 and _turn(x, y, lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in range(n - 1, -1, -1):
        while len(upper) > 1 and _turn(x, y, upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return np.empty(0, dtype=np.int64)
    return np.asarray(hull, dtype=np.int64)


class _Hull3D:
    """Working state of the quickhull loop (one instance per call)."""

    def __init__(self, pts: np.ndarray):
        n = pts.shape[0]
        self.x = np.ascontiguousarray(pts[:, 0])
        self.y = np.ascontiguousarray(pts[:, 1])
        self.z = np.ascontiguousarray(pts[:, 2])
        self.tris: list[list[int]] = []
        self.nbrs: list[list[int]] = []
        self.outside: list[list[int]] = []
        self.best: list[tuple[float, int]] = []  # (float depth, point) per facet
        cap = 8 * n + 16
        self.planes = np.empty((cap, 4))
        self.norms = np.empty(cap)
        self.alive = np.zeros(cap, dtype=bool)

    def grow_facets(self, extra: int) -> None:
        need = len(self.tris) + extra
        cap = self.planes.shape[0]
        if need <= cap:
            return
        cap = max(need, 2 * cap)
        planes = np.empty((cap, 4))
        planes[: len(self.tris)] = self.planes[: len(self.tris)]
        self.planes = planes
        norms = np.empty(cap)
        norms[: len(self.tris)] = self.norms[: len(self.tris)]
        self.norms = norms
        alive = np.zeros(cap, dtype=bool)
        alive[: len(self.tris)] = self.alive[: len(self.tris)]
        self.alive = alive

    def add_facet(self, a: int, b: int, c: int) -> int:
        x, y, z = self.x, self.y, self.z
        ux = x[b] - x[a]
        uy = y[b] - y[a]
        uz = z[b] - z[a]
        vx = x[c] - x[a]
        vy = y[c] - y[a]
        vz = z[c] - z[a]
        nx = uy * vz - uz * vy
        ny = uz * vx - ux * vz
        nz = ux * vy - uy * vx
        off = (nx * x[a] + ny * y[a]) + nz * z[a]
        f = len(self.tris)
        self.tris.append([a, b, c])
        self.nbrs.append([-1, -1, -1])
        self.outside.append([])
        self.best.append((0.0, -1))
        self.planes[f, 0] = nx
        self.planes[f, 1] = ny
        self.planes[f, 2] = nz
        self.planes[f, 3] = off
        self.norms[f] = np.sqrt((nx * nx + ny * ny) + nz * nz)
        self.alive[f] = True
        return f

    def signs_and_depths(self, facets: np.ndarray, p: int):
        """Exact beyond/below signs of point p against the facets' defining
        triangles, plus float depths for farthest-first ordering.

        The float determinant decides when it exceeds the rounding-error
        filter; otherwise the exact rational routine settles the sign.
        """
        x, y, z = self.x, self.y, self.z
        tris = np.asarray([self.tris[f] for f in facets], dtype=np.int64)
        a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
        px, py, pz = x[p], y[p], z[p]
        uxv = x[b] - x[a]
        uyv = y[b] - y[a]
        uzv = z[b] - z[a]
        vxv = x[c] - x[a]
        vyv = y[c] - y[a]
        vzv = z[c] - z[a]
        wxv = px - x[a]
        wyv = py - y[a]
        wzv = pz - z[a]
        t1 = uyv * vzv - uzv * vyv
        t2 = uzv * vxv - uxv * vzv
        t3 = uxv * vyv - uyv * vxv
        det = (t1 * wxv + t2 * wyv) + t3 * wzv
        permanent = (
            (np.abs(uyv * vzv) + np.abs(uzv * vyv)) * np.abs(wxv)
            + (np.abs(uzv * vxv) + np.abs(uxv * vzv)) * np.abs(wyv)
        ) + (np.abs(uxv * vyv) + np.abs(uyv * vxv)) * np.abs(wzv)
        errbound = _FILTER * permanent
        signs = np.where(det > errbound, 1, np.where(-det > errbound, -1, 0))
        unsure = np.flatnonzero((signs == 0) & (errbound > 0.0))
        for k in unsure:
            ia, ib, ic = int(a[k]), int(b[k]), int(c[k])
            signs[k] = above_sign(
                x[ia], y[ia], z[ia],
                x[ib], y[ib], z[ib],
                x[ic], y[ic], z[ic],
                px, py, pz,
            )
        depths = det / self.norms[facets]
        return signs, depths


def hull3d(pts: np.ndarray, jpts: np.ndarray, eps: float):
    """Quickhull of (m, 3) float64 points.

    ``pts`` are the lexicographically sorted, deduplicated coordinates used
    for the degeneracy test at tolerance ``eps``; ``jpts`` are the same
    points carrying the caller's deterministic general-position joggle, on
    which the hull combinatorics is computed with exact orientation
    predicates.  Farthest-first insertion with per-facet outside sets: a
    point is discarded only when it is exactly inside every facet, so no
    input point ends beyond the output surface.

    Returns (tris, planes): outward-oriented triangles (F, 3) int64 and
    their supporting planes (F, 4) float64 rows (nx, ny, nz, off) with
    off = <n, a> for a triangle corner a (in joggled coordinates).
    Returns None for affinely dependent (flat) input.
    """
    n = pts.shape[0]
    if n < 4:
        return None
    simplex = _initial_simplex(pts[:, 0], pts[:, 1], pts[:, 2], eps)
    if simplex is None:
        return None
    i0, i1, i2, i3 = simplex

    H = _Hull3D(jpts)
    x, y, z = H.x, H.y, H.z
    icx = (x[i0] + x[i1] + x[i2] + x[i3]) / 4.0
    icy = (y[i0] + y[i1] + y[i2] + y[i3]) / 4.0
    icz = (z[i0] + z[i1] + z[i2] + z[i3]) / 4.0
    for a, b, c in ((i0, i1, i2), (i0, i1, i3), (i0, i2, i3), (i1, i2, i3)):
        nx, ny, nz, off = _plane_of(x, y, z, a, b, c)
        if ((nx * icx + ny * icy) + nz * icz) - off > 0.0:
            b, c = c, b
        H.add_facet(a, b, c)
    _link_all(H.tris, H.nbrs, range(4))

    pool = [p for p in range(n) if p != i0 and p != i1 and p != i2 and p != i3]
    _partition_points(H, pool, list(range(4)))

    guard = 4 * n + 64
    for _ in range(guard):
        target = -1
        depth = 0.0
        for f in range(len(H.tris)):
            if H.alive[f] and H.best[f][1] >= 0 and H.best[f][0] > depth:
                depth = H.best[f][0]
                target = f
        if target < 0:
            break
        _insert_point(H, H.best[target][1])
    else:
        raise RuntimeError("hull3d: did not converge")

    m = len(H.tris)
    live = np.flatnonzero(H.alive[:m])
    out_tris = np.asarray([H.tris[f] for f in live], dtype=np.int64)
    out_planes = H.planes[live].copy()
    return out_tris, out_planes


def _plane_of(x, y, z, a, b, c):
    ux = x[b] - x[a]
    uy = y[b] - y[a]
    uz = z[b] - z[a]
    vx = x[c] - x[a]
    vy = y[c] - y[a]
    vz = z[c] - z[a]
    nx = uy * vz - uz * vy
    ny = uz * vx - ux * vz
    nz = ux * vy - uy * vx
    off = (nx * x[a] + ny * y[a]) + nz * z[a]
    return nx, ny, nz, off


def _partition_points(H: _Hull3D, pool, facets) -> None:
    """Assign each pool point to the facet it is (float-)deepest beyond,
    among facets it is exactly beyond; drop points beyond none."""
    if not pool or not facets:
        return
    farr = np.asarray(facets, dtype=np.int64)
    for p in pool:
        signs, depths = H.signs_and_depths(farr, p)
        beyond = signs > 0
        if not np.any(beyond):
            continue
        masked = np.where(beyond, depths, -np.inf)
        k = int(np.argmax(masked))
        f = facets[k]
        H.outside[f].append(p)
        if depths[k] > H.best[f][0] or H.best[f][1] < 0:
            H.best[f] = (float(depths[k]), p)


def _insert_point(H: _Hull3D, p: int) -> None:
    m = len(H.tris)
    live = np.flatnonzero(H.alive[:m])
    signs, _ = H.signs_and_depths(live, p)
    visible = set(live[signs > 0].tolist())
    if not visible:
        raise RuntimeError("hull3d: inserted point sees no facet")
    edges = _horizon(H.tris, H.nbrs, visible)
    H.grow_facets(len(edges))
    # fan new facets (a, b, p); edges of (a, b, p): 0 = (a, b) horizon,
    # 1 = (b, p) pairs with the next fan, 2 = (p, a) with the previous
    by_start: dict[int, int] = {}
    by_end: dict[int, int] = {}
    for a, b, hidden, f in edges:
        nf = H.add_facet(a, b, p)
        by_start[a] = nf
        by_end[b] = nf
        H.nbrs[nf][0] = hidden
        hn = H.nbrs[hidden]
        hn[hn.index(f)] = nf
    for a, b, hidden, f in edges:
        nf = by_start[a]
        H.nbrs[nf][1] = by_start[b]
        H.nbrs[nf][2] = by_end[a]
    orphans: list[int] = []
    for f in sorted(visible):
        H.alive[f] = False
        for q in H.outside[f]:
            if q != p:
                orphans.append(q)
        H.outside[f] = []
        H.best[f] = (0.0, -1)
    orphans.sort()
    # re-partition over every alive facet: a point is dropped only when it
    # is exactly inside the whole current hull, which only grows
    allfacets = np.flatnonzero(H.alive[: len(H.tris)]).tolist()
    _partition_points(H, orphans, allfacets)


def _initial_simplex(x, y, z, eps):
    i0 = 0
    dx = x - x[i0]
    dy = y - y[i0]
    dz = z - z[i0]
    d2 = (dx * dx + dy * dy) + dz * dz
    i1 = int(np.argmax(d2))
    if d2[i1] <= eps * eps:
        return None
    ux = x[i1] - x[i0]
    uy = y[i1] - y[i0]
    uz = z[i1] - z[i0]
    cx = dy * uz - dz * uy
    cy = dz * ux - dx * uz
    cz = dx * uy - dy * ux
    c2 = (cx * cx + cy * cy) + cz * cz
    i2 = int(np.argmax(c2))
    ulen2 = (ux * ux + uy * uy) + uz * uz
    if c2[i2] <= (eps * eps) * ulen2:
        return None
    nx, ny, nz, off = _plane_of(x, y, z, i0, i1, i2)
    dplane = ((nx * x + ny * y) + nz * z) - off
    absd = np.abs(dplane)
    i3 = int(np.argmax(absd))
    nlen = np.sqrt((nx * nx + ny * ny) + nz * nz)
    if absd[i3] <= eps * nlen:
        return None
    return i0, i1, i2, i3


def _link_all(tris, nbrs, ids):
    edge: dict[tuple[int, int], int] = {}
    for f in ids:
        a, b, c = tris[f]
        edge[(a, b)] = f
        edge[(b, c)] = f
        edge[(c, a)] = f
    for f in ids:
        a, b, c = tris[f]
        nbrs[f][0] = edge[(b, a)]
        nbrs[f][1] = edge[(c, b)]
        nbrs[f][2] = edge[(a, c)]


def _horizon(tris, nbrs, visible):
    """Directed horizon edges (a, b, hidden facet, visible facet) of a
    visible set, in facet-id order.  With exact predicates and points in
    general position the horizon is always one simple cycle."""
    edges = []
    for f in sorted(visible):
        a, b, c = tris[f]
        fn = nbrs[f]
        if fn[0] not in visible:
            edges.append((a, b, fn[0], f))
        if fn[1] not in visible:
            edges.append((b, c, fn[1], f))
        if fn[2] not in visible:
            edges.append((c, a, fn[2], f))
    if not edges:
        raise RuntimeError("hull3d: empty horizon")
    nxt = {}
    for a, b, hidden, f in edges:
        if a in nxt:
            raise RuntimeError("hull3d: pinched horizon")
        nxt[a] = b
    start = edges[0][0]
    cur = nxt[start]
    count = 1
    while cur != start:
        cur = nxt[cur]
        count += 1
        if count > len(edges):
            raise RuntimeError("hull3d: split horizon")
    if count != len(edges):
        raise RuntimeError("hull3d: split horizon")
    return edges
