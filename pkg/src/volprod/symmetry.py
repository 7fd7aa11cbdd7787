"""The rotation group of the reference tetrahedron, symmetry tests, orbit
symmetrization, and the classification of tetrahedrally symmetric polyhedra
with at most six vertices (tetrahedron or octahedron, nothing else).
"""

from __future__ import annotations

import enum
import itertools

import numpy as np

from .errors import NotClosed, NotSymmetric, SymmetryViolation
from .geometry import Polytope, convex_hull

REFERENCE_TETRAHEDRON = np.array(
    [(1.0, 1.0, -1.0), (1.0, -1.0, 1.0), (-1.0, 1.0, 1.0), (-1.0, -1.0, -1.0)]
)


class SymmetryClass(enum.Enum):
    TETRAHEDRON = "Tetrahedron"
    OCTAHEDRON = "Octahedron"
    OTHER = "Other"


def _signed_permutations():
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1.0, -1.0), repeat=3):
            M = np.zeros((3, 3))
            for i, (p, s) in enumerate(zip(perm, signs)):
                M[i, p] = s
            yield M


def _build_group():
    """All 12 signed permutation matrices with det +1 that permute the
    reference tetrahedron's vertices."""
    out = []
    ref = REFERENCE_TETRAHEDRON
    for M in _signed_permutations():
        if round(float(np.linalg.det(M))) != 1:
            continue
        img = ref @ M.T
        ok = all(
            any(np.array_equal(img[i], ref[j]) for j in range(4)) for i in range(4)
        )
        if ok:
            M.setflags(write=False)
            out.append(M)
    out.sort(key=lambda M: tuple(M.ravel()))
    assert len(out) == 12
    return tuple(out)


_GROUP = _build_group()


def tetrahedral_group():
    """The 12 rotations of the reference tetrahedron, as 3x3 matrices with
    entries in {-1, 0, 1}, in a fixed deterministic order."""
    return list(_GROUP)


def _match_threshold(V: np.ndarray, tol: float) -> float:
    span = V.max(axis=0) - V.min(axis=0)
    return tol * float(np.sqrt(np.sum(span * span)))


def _match_sets(V: np.ndarray, W: np.ndarray, thresh: float) -> bool:
    """Greedy nearest-neighbor bijection between two point sets: pairs are
    claimed in order of increasing distance, which stays correct when
    several points cluster within the threshold."""
    n = len(V)
    if n != len(W):
        return False
    d = np.sqrt(np.sum((V[:, None, :] - W[None, :, :]) ** 2, axis=2))
    order = np.argsort(d, axis=None, kind="stable")
    vfree = np.ones(n, dtype=bool)
    wfree = np.ones(n, dtype=bool)
    matched = 0
    for flat in order:
        if d.flat[flat] > thresh:
            break
        i, j = divmod(int(flat), n)
        if vfree[i] and wfree[j]:
            vfree[i] = False
            wfree[j] = False
            matched += 1
            if matched == n:
                return True
    return False


def _hausdorff_close(V: np.ndarray, W: np.ndarray, thresh: float) -> bool:
    d2 = np.sum((V[:, None, :] - W[None, :, :]) ** 2, axis=2)
    t2 = thresh * thresh
    return bool(np.all(d2.min(axis=1) <= t2) and np.all(d2.min(axis=0) <= t2))


def is_tetrahedrally_symmetric(K: Polytope, tol: float = 1e-9) -> bool:
    """True iff every group rotation maps the vertex set of K onto itself
    within tol (relative to the bounding-box diameter).

    Matching is two-sided coverage rather than a strict bijection: bodies
    with sub-tolerance vertex clusters may resolve a cluster into different
    point counts on different faces, which coverage treats as equal."""
    if K.dim != 3:
        return False
    V = K.vertices
    thresh = max(_match_threshold(V, tol), 1e-300)
    return all(_hausdorff_close(V @ g.T, V, thresh) for g in _GROUP)


def symmetrize_orbit(generators) -> Polytope:
    """Convex hull of the group orbit of the given generator points."""
    gens = np.asarray(generators, dtype=np.float64).reshape(-1, 3)
    if len(gens) < 1:
        raise ValueError("need at least one generator")
    pts = np.concatenate([gens @ g.T for g in _GROUP])
    return convex_hull(pts, 3)


def classify_low_vertex_symmetric(K: Polytope, tol: float = 1e-7) -> SymmetryClass:
    """Combinatorial type of a tetrahedrally symmetric polyhedron with at
    most 6 vertices: TETRAHEDRON (either orientation of a scaled reference
    tetrahedron), OCTAHEDRON (axis points +-p e_i), or OTHER for more than
    6 vertices.  A 5-vertex (or otherwise unrecognized small) configuration
    contradicts the symmetry assumption and raises SymmetryViolation."""
    if not is_tetrahedrally_symmetric(K, tol):
        raise NotSymmetric("body is not tetrahedrally symmetric")
    V = K.vertices
    n = len(V)
    if n > 6:
        return SymmetryClass.OTHER
    thresh = _match_threshold(V, tol)
    if n == 4:
        p = float(np.mean(np.abs(V)))
        if np.max(np.abs(np.abs(V) - p)) <= thresh:
            parities = np.prod(np.sign(V), axis=1)
            if np.all(parities == parities[0]):
                return SymmetryClass.TETRAHEDRON
    if n == 6:
        p = float(np.mean(np.max(np.abs(V), axis=1)))
        axes = set()
        ok = True
        for v in V:
            i = int(np.argmax(np.abs(v)))
            rest = np.delete(v, i)
            if abs(abs(v[i]) - p) > thresh or np.max(np.abs(rest)) > thresh:
                ok = False
                break
            axes.add((i, v[i] > 0))
        if ok and len(axes) == 6:
            return SymmetryClass.OCTAHEDRON
    raise SymmetryViolation(
        f"{n}-vertex configuration is impossible under tetrahedral symmetry"
    )


def orbit_decomposition(V, g) -> list[list[int]]:
    """Partition of the point set V into orbits of the cyclic group
    generated by g; raises NotClosed when g does not permute V."""
    V = np.asarray(V, dtype=np.float64).reshape(-1, 3)
    thresh = max(_match_threshold(V, 1e-9), 1e-300)
    img = V @ np.asarray(g, dtype=np.float64).T
    d = np.sqrt(np.sum((img[:, None, :] - V[None, :, :]) ** 2, axis=2))
    perm = np.argmin(d, axis=1)
    if np.any(d[np.arange(len(V)), perm] > thresh) or len(set(perm)) != len(V):
        raise NotClosed("point set is not closed under g")
    seen = np.zeros(len(V), dtype=bool)
    orbits = []
    for i in range(len(V)):
        if seen[i]:
            continue
        orbit = [i]
        seen[i] = True
        j = int(perm[i])
        while j != i:
            orbit.append(j)
            seen[j] = True
            j = int(perm[j])
        orbits.append(orbit)
    return orbits
