# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled convex hull kernels (primary backend).

Operation-for-operation mirror of volprod._kernels_py: identical
association order in all floating-point expressions (the extension is
built with -ffp-contract=off so the C compiler cannot fuse them), the
same first-maximum tie-breaking in every scan, and the same exact-rational
fallback for inconclusive orientation signs.  Outputs are bit-identical
to the fallback's; benchmarks/bench_kernels.py verifies that.
"""

from libc.math cimport fabs, sqrt

import numpy as np

from ._exact import above_sign, turn_sign

BACKEND = "cython"

cdef double EPSM = 1.1102230246251565e-16  # 2^-53
cdef double FILTER = (7.0 + 56.0 * EPSM) * EPSM
cdef double FILTER2 = (3.0 + 16.0 * EPSM) * EPSM


cdef int _turn(double[:, ::1] P, Py_ssize_t j, Py_ssize_t k, Py_ssize_t i):
    cdef double det = (P[k, 0] - P[j, 0]) * (P[i, 1] - P[j, 1]) - (
        P[k, 1] - P[j, 1]
    ) * (P[i, 0] - P[j, 0])
    cdef double bound = FILTER2 * (
        fabs((P[k, 0] - P[j, 0]) * (P[i, 1] - P[j, 1]))
        + fabs((P[k, 1] - P[j, 1]) * (P[i, 0] - P[j, 0]))
    )
    if det > bound:
        return 1
    if -det > bound:
        return -1
    if bound == 0.0:
        return 0
    return turn_sign(P[j, 0], P[j, 1], P[k, 0], P[k, 1], P[i, 0], P[i, 1])


def hull2d(pts):
    """See volprod._kernels_py.hull2d."""
    cdef double[:, ::1] P = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t n = P.shape[0]
    out = np.empty(n + 1, dtype=np.int64)
    cdef long long[::1] stack = out
    cdef Py_ssize_t nl = 0, nu = 0, i
    for i in range(n):
        while nl > 1 and _turn(P, stack[nl - 2], stack[nl - 1], i) <= 0:
            nl -= 1
        stack[nl] = i
        nl += 1
    upper_buf = np.empty(n + 1, dtype=np.int64)
    cdef long long[::1] ustack = upper_buf
    for i in range(n - 1, -1, -1):
        while nu > 1 and _turn(P, ustack[nu - 2], ustack[nu - 1], i) <= 0:
            nu -= 1
        ustack[nu] = i
        nu += 1
    cdef Py_ssize_t total = (nl - 1) + (nu - 1)
    if total < 3:
        return np.empty(0, dtype=np.int64)
    res = np.empty(total, dtype=np.int64)
    cdef long long[::1] R = res
    for i in range(nl - 1):
        R[i] = stack[i]
    for i in range(nu - 1):
        R[nl - 1 + i] = ustack[i]
    return res


cdef class _Hull3D:
    cdef double[::1] x, y, z
    cdef double[:, ::1] planes
    cdef double[::1] norms
    cdef char[::1] alive
    cdef long long[:, ::1] tris
    cdef long long[:, ::1] nbrs
    cdef long long[::1] assign       # facet a point is outside of, -1/-2
    cdef double[::1] best_depth
    cdef long long[::1] best_point
    cdef Py_ssize_t nfacets, npts, cap
    cdef object planes_np, norms_np, alive_np, tris_np, nbrs_np, bd_np, bp_np

    def __init__(self, jpts):
        arr = np.ascontiguousarray(jpts, dtype=np.float64)
        cdef Py_ssize_t n = arr.shape[0]
        self.npts = n
        self.x = np.ascontiguousarray(arr[:, 0])
        self.y = np.ascontiguousarray(arr[:, 1])
        self.z = np.ascontiguousarray(arr[:, 2])
        self.cap = 8 * n + 16
        self.planes_np = np.empty((self.cap, 4))
        self.norms_np = np.empty(self.cap)
        self.alive_np = np.zeros(self.cap, dtype=np.int8)
        self.tris_np = np.empty((self.cap, 3), dtype=np.int64)
        self.nbrs_np = np.empty((self.cap, 3), dtype=np.int64)
        self.bd_np = np.zeros(self.cap)
        self.bp_np = np.full(self.cap, -1, dtype=np.int64)
        self.planes = self.planes_np
        self.norms = self.norms_np
        self.alive = self.alive_np
        self.tris = self.tris_np
        self.nbrs = self.nbrs_np
        self.best_depth = self.bd_np
        self.best_point = self.bp_np
        self.assign = np.full(n, -1, dtype=np.int64)
        self.nfacets = 0

    cdef void grow(self, Py_ssize_t extra):
        cdef Py_ssize_t need = self.nfacets + extra
        if need <= self.cap:
            return
        cdef Py_ssize_t newcap = 2 * self.cap
        if need > newcap:
            newcap = need
        pn = np.empty((newcap, 4))
        pn[: self.nfacets] = self.planes_np[: self.nfacets]
        self.planes_np = pn
        self.planes = pn
        nn = np.empty(newcap)
        nn[: self.nfacets] = self.norms_np[: self.nfacets]
        self.norms_np = nn
        self.norms = nn
        an = np.zeros(newcap, dtype=np.int8)
        an[: self.nfacets] = self.alive_np[: self.nfacets]
        self.alive_np = an
        self.alive = an
        tn = np.empty((newcap, 3), dtype=np.int64)
        tn[: self.nfacets] = self.tris_np[: self.nfacets]
        self.tris_np = tn
        self.tris = tn
        bn = np.empty((newcap, 3), dtype=np.int64)
        bn[: self.nfacets] = self.nbrs_np[: self.nfacets]
        self.nbrs_np = bn
        self.nbrs = bn
        dn = np.zeros(newcap)
        dn[: self.nfacets] = self.bd_np[: self.nfacets]
        self.bd_np = dn
        self.best_depth = dn
        pn2 = np.full(newcap, -1, dtype=np.int64)
        pn2[: self.nfacets] = self.bp_np[: self.nfacets]
        self.bp_np = pn2
        self.best_point = pn2
        self.cap = newcap

    cdef Py_ssize_t add_facet(self, Py_ssize_t a, Py_ssize_t b, Py_ssize_t c):
        cdef double ux, uy, uz, vx, vy, vz, nx, ny, nz, off
        ux = self.x[b] - self.x[a]
        uy = self.y[b] - self.y[a]
        uz = self.z[b] - self.z[a]
        vx = self.x[c] - self.x[a]
        vy = self.y[c] - self.y[a]
        vz = self.z[c] - self.z[a]
        nx = uy * vz - uz * vy
        ny = uz * vx - ux * vz
        nz = ux * vy - uy * vx
        off = (nx * self.x[a] + ny * self.y[a]) + nz * self.z[a]
        cdef Py_ssize_t f = self.nfacets
        self.tris[f, 0] = a
        self.tris[f, 1] = b
        self.tris[f, 2] = c
        self.nbrs[f, 0] = -1
        self.nbrs[f, 1] = -1
        self.nbrs[f, 2] = -1
        self.planes[f, 0] = nx
        self.planes[f, 1] = ny
        self.planes[f, 2] = nz
        self.planes[f, 3] = off
        self.norms[f] = sqrt((nx * nx + ny * ny) + nz * nz)
        self.alive[f] = 1
        self.best_depth[f] = 0.0
        self.best_point[f] = -1
        self.nfacets += 1
        return f

    cdef int sign_depth(self, Py_ssize_t f, Py_ssize_t p, double* depth):
        """Exact beyond/below sign of p vs facet f's defining triangle,
        float depth via *depth (same expressions as the fallback)."""
        cdef Py_ssize_t a = self.tris[f, 0]
        cdef Py_ssize_t b = self.tris[f, 1]
        cdef Py_ssize_t c = self.tris[f, 2]
        cdef double ux = self.x[b] - self.x[a]
        cdef double uy = self.y[b] - self.y[a]
        cdef double uz = self.z[b] - self.z[a]
        cdef double vx = self.x[c] - self.x[a]
        cdef double vy = self.y[c] - self.y[a]
        cdef double vz = self.z[c] - self.z[a]
        cdef double wx = self.x[p] - self.x[a]
        cdef double wy = self.y[p] - self.y[a]
        cdef double wz = self.z[p] - self.z[a]
        cdef double t1 = uy * vz - uz * vy
        cdef double t2 = uz * vx - ux * vz
        cdef double t3 = ux * vy - uy * vx
        cdef double det = (t1 * wx + t2 * wy) + t3 * wz
        cdef double permanent = (
            (fabs(uy * vz) + fabs(uz * vy)) * fabs(wx)
            + (fabs(uz * vx) + fabs(ux * vz)) * fabs(wy)
        ) + (fabs(ux * vy) + fabs(uy * vx)) * fabs(wz)
        cdef double errbound = FILTER * permanent
        depth[0] = det / self.norms[f]
        if det > errbound:
            return 1
        if -det > errbound:
            return -1
        if errbound == 0.0:
            return 0
        return above_sign(
            self.x[a], self.y[a], self.z[a],
            self.x[b], self.y[b], self.z[b],
            self.x[c], self.y[c], self.z[c],
            self.x[p], self.y[p], self.z[p],
        )


def hull3d(spts, jpts, double eps):
    """See volprod._kernels_py.hull3d."""
    cdef double[:, ::1] S = np.ascontiguousarray(spts, dtype=np.float64)
    cdef Py_ssize_t n = S.shape[0]
    if n < 4:
        return None
    cdef long long sim[4]
    if not _initial_simplex(S, eps, sim):
        return None
    cdef Py_ssize_t i0 = sim[0], i1 = sim[1], i2 = sim[2], i3 = sim[3]

    cdef _Hull3D H = _Hull3D(jpts)
    cdef double icx = (H.x[i0] + H.x[i1] + H.x[i2] + H.x[i3]) / 4.0
    cdef double icy = (H.y[i0] + H.y[i1] + H.y[i2] + H.y[i3]) / 4.0
    cdef double icz = (H.z[i0] + H.z[i1] + H.z[i2] + H.z[i3]) / 4.0
    cdef Py_ssize_t a, b, c, f, q, k
    cdef double nx, ny, nz, off
    cdef long long[4][3] init_tris
    init_tris[0][0] = i0; init_tris[0][1] = i1; init_tris[0][2] = i2
    init_tris[1][0] = i0; init_tris[1][1] = i1; init_tris[1][2] = i3
    init_tris[2][0] = i0; init_tris[2][1] = i2; init_tris[2][2] = i3
    init_tris[3][0] = i1; init_tris[3][1] = i2; init_tris[3][2] = i3
    for k in range(4):
        a = init_tris[k][0]
        b = init_tris[k][1]
        c = init_tris[k][2]
        nx, ny, nz, off = _plane_of(H, a, b, c)
        if ((nx * icx + ny * icy) + nz * icz) - off > 0.0:
            b, c = c, b
        H.add_facet(a, b, c)
    _link_init(H)

    # initial partition in ascending point order over the 4 facets
    cdef Py_ssize_t p
    for p in range(n):
        if p == i0 or p == i1 or p == i2 or p == i3:
            H.assign[p] = -2
            continue
        _assign_point(H, p, -1)

    cdef Py_ssize_t guard = 4 * n + 64
    cdef Py_ssize_t it, target
    cdef double depth
    for it in range(guard):
        target = -1
        depth = 0.0
        for f in range(H.nfacets):
            if H.alive[f] and H.best_point[f] >= 0 and H.best_depth[f] > depth:
                depth = H.best_depth[f]
                target = f
        if target < 0:
            break
        _insert_point(H, H.best_point[target])
    else:
        raise RuntimeError("hull3d: did not converge")

    cdef Py_ssize_t m = H.nfacets
    cdef Py_ssize_t count = 0
    for f in range(m):
        if H.alive[f]:
            count += 1
    out_tris = np.empty((count, 3), dtype=np.int64)
    out_planes = np.empty((count, 4))
    cdef long long[:, ::1] OT = out_tris
    cdef double[:, ::1] OP = out_planes
    count = 0
    for f in range(m):
        if H.alive[f]:
            OT[count, 0] = H.tris[f, 0]
            OT[count, 1] = H.tris[f, 1]
            OT[count, 2] = H.tris[f, 2]
            OP[count, 0] = H.planes[f, 0]
            OP[count, 1] = H.planes[f, 1]
            OP[count, 2] = H.planes[f, 2]
            OP[count, 3] = H.planes[f, 3]
            count += 1
    return out_tris, out_planes


cdef (double, double, double, double) _plane_of(_Hull3D H, Py_ssize_t a, Py_ssize_t b, Py_ssize_t c):
    cdef double ux = H.x[b] - H.x[a]
    cdef double uy = H.y[b] - H.y[a]
    cdef double uz = H.z[b] - H.z[a]
    cdef double vx = H.x[c] - H.x[a]
    cdef double vy = H.y[c] - H.y[a]
    cdef double vz = H.z[c] - H.z[a]
    cdef double nx = uy * vz - uz * vy
    cdef double ny = uz * vx - ux * vz
    cdef double nz = ux * vy - uy * vx
    cdef double off = (nx * H.x[a] + ny * H.y[a]) + nz * H.z[a]
    return nx, ny, nz, off


cdef void _link_init(_Hull3D H):
    cdef Py_ssize_t f, g, k, j
    cdef Py_ssize_t ea, eb
    for f in range(4):
        for k in range(3):
            ea = H.tris[f, k]
            eb = H.tris[f, (k + 1) % 3]
            for g in range(4):
                if g == f:
                    continue
                for j in range(3):
                    if H.tris[g, j] == eb and H.tris[g, (j + 1) % 3] == ea:
                        H.nbrs[f, k] = g
    return


cdef void _assign_point(_Hull3D H, Py_ssize_t p, Py_ssize_t skip_dead):
    """Assign p to the (float-)deepest facet it is exactly beyond, scanning
    alive facets in ascending id order; drop (assign -1) if beyond none."""
    cdef Py_ssize_t f, bestf = -1
    cdef double d, bestd = 0.0
    cdef int s
    cdef bint have = 0
    for f in range(H.nfacets):
        if not H.alive[f]:
            continue
        s = H.sign_depth(f, p, &d)
        if s > 0:
            if (not have) or d > bestd:
                bestd = d
                bestf = f
                have = 1
    if bestf < 0:
        H.assign[p] = -1
        return
    H.assign[p] = bestf
    if H.best_point[bestf] < 0 or bestd > H.best_depth[bestf]:
        H.best_depth[bestf] = bestd
        H.best_point[bestf] = p


cdef void _insert_point(_Hull3D H, Py_ssize_t p):
    cdef Py_ssize_t m = H.nfacets
    cdef Py_ssize_t f, k, g, j, a, b
    cdef double d
    cdef int s
    vis_np = np.zeros(m, dtype=np.int8)
    cdef char[::1] vis = vis_np
    cdef Py_ssize_t nvis = 0
    for f in range(m):
        if not H.alive[f]:
            continue
        s = H.sign_depth(f, p, &d)
        if s > 0:
            vis[f] = 1
            nvis += 1
    if nvis == 0:
        raise RuntimeError("hull3d: inserted point sees no facet")
    # horizon edges in facet-id order: (a, b, hidden, visible facet)
    cdef Py_ssize_t maxe = 3 * nvis
    ebuf = np.empty((maxe, 4), dtype=np.int64)
    cdef long long[:, ::1] E = ebuf
    cdef Py_ssize_t ne = 0
    for f in range(m):
        if not vis[f]:
            continue
        for k in range(3):
            g = H.nbrs[f, k]
            if g >= m or not vis[g]:
                E[ne, 0] = H.tris[f, k]
                E[ne, 1] = H.tris[f, (k + 1) % 3]
                E[ne, 2] = g
                E[ne, 3] = f
                ne += 1
    if ne == 0:
        raise RuntimeError("hull3d: empty horizon")
    # cycle validation via successor-by-start-vertex
    cdef Py_ssize_t npts = H.npts
    nxt_np = np.full(npts, -1, dtype=np.int64)
    cdef long long[::1] nxt = nxt_np
    cdef Py_ssize_t i
    for i in range(ne):
        a = E[i, 0]
        if nxt[a] >= 0:
            raise RuntimeError("hull3d: pinched horizon")
        nxt[a] = E[i, 1]
    cdef Py_ssize_t start = E[0, 0]
    cdef Py_ssize_t cur = nxt[start]
    cdef Py_ssize_t cnt = 1
    while cur != start:
        if cur < 0 or cnt > ne:
            raise RuntimeError("hull3d: split horizon")
        cur = nxt[cur]
        cnt += 1
    if cnt != ne:
        raise RuntimeError("hull3d: split horizon")
    H.grow(ne)
    by_start_np = np.empty(npts, dtype=np.int64)
    by_end_np = np.empty(npts, dtype=np.int64)
    cdef long long[::1] by_start = by_start_np
    cdef long long[::1] by_end = by_end_np
    cdef Py_ssize_t nf
    for i in range(ne):
        a = E[i, 0]
        b = E[i, 1]
        g = E[i, 2]
        f = E[i, 3]
        nf = H.add_facet(a, b, p)
        by_start[a] = nf
        by_end[b] = nf
        H.nbrs[nf, 0] = g
        for j in range(3):
            if H.nbrs[g, j] == f:
                H.nbrs[g, j] = nf
                break
    for i in range(ne):
        a = E[i, 0]
        b = E[i, 1]
        nf = by_start[a]
        H.nbrs[nf, 1] = by_start[b]
        H.nbrs[nf, 2] = by_end[a]
    H.assign[p] = -2
    for f in range(m):
        if vis[f]:
            H.alive[f] = 0
            H.best_depth[f] = 0.0
            H.best_point[f] = -1
    # re-partition orphans (ascending point order) over every alive facet
    cdef Py_ssize_t qq
    for qq in range(npts):
        g = H.assign[qq]
        if g >= 0 and not H.alive[g]:
            _assign_point(H, qq, -1)


cdef bint _initial_simplex(double[:, ::1] S, double eps, long long* sim):
    cdef Py_ssize_t n = S.shape[0]
    cdef Py_ssize_t i0 = 0, i1 = 0, i2 = 0, i3 = 0, i
    cdef double dx, dy, dz, d2, best
    best = -1.0
    for i in range(n):
        dx = S[i, 0] - S[i0, 0]
        dy = S[i, 1] - S[i0, 1]
        dz = S[i, 2] - S[i0, 2]
        d2 = (dx * dx + dy * dy) + dz * dz
        if d2 > best:
            best = d2
            i1 = i
    if best <= eps * eps:
        return 0
    cdef double ux = S[i1, 0] - S[i0, 0]
    cdef double uy = S[i1, 1] - S[i0, 1]
    cdef double uz = S[i1, 2] - S[i0, 2]
    cdef double cx, cy, cz, c2
    best = -1.0
    for i in range(n):
        dx = S[i, 0] - S[i0, 0]
        dy = S[i, 1] - S[i0, 1]
        dz = S[i, 2] - S[i0, 2]
        cx = dy * uz - dz * uy
        cy = dz * ux - dx * uz
        cz = dx * uy - dy * ux
        c2 = (cx * cx + cy * cy) + cz * cz
        if c2 > best:
            best = c2
            i2 = i
    cdef double ulen2 = (ux * ux + uy * uy) + uz * uz
    if best <= (eps * eps) * ulen2:
        return 0
    cdef double vx = S[i2, 0] - S[i0, 0]
    cdef double vy = S[i2, 1] - S[i0, 1]
    cdef double vz = S[i2, 2] - S[i0, 2]
    cdef double nx = uy * vz - uz * vy
    cdef double ny = uz * vx - ux * vz
    cdef double nz = ux * vy - uy * vx
    cdef double off = (nx * S[i0, 0] + ny * S[i0, 1]) + nz * S[i0, 2]
    cdef double dp, adp
    best = -1.0
    for i in range(n):
        dp = ((nx * S[i, 0] + ny * S[i, 1]) + nz * S[i, 2]) - off
        adp = fabs(dp)
        if adp > best:
            best = adp
            i3 = i
    cdef double nlen = sqrt((nx * nx + ny * ny) + nz * nz)
    if best <= eps * nlen:
        return 0
    sim[0] = i0
    sim[1] = i1
    sim[2] = i2
    sim[3] = i3
    return 1
