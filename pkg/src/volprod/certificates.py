"""Machine-checkable inequality certificates.

certify_plane re-executes, on a concrete 2D body, every inequality in the
hexagon proof of the planar bound 3/2; certify_space does the same for the
14-piece partition proof of the tetrahedrally symmetric 3D bound 2/3.
Each certificate records every verified inequality as a named Check with
lhs, rhs, residual, and pass flag; a check missing by more than TOL_CERT
raises CertificateInvalid carrying the partially filled certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import (
    PlaneBasis,
    central_section,
    clip_polygon,
    cone_volume,
    convex_polygon_intersection_area,
    difference_body,
    polar,
    project,
)
from .errors import (
    CertificateInvalid,
    NoConvergence,
    NotCentrallySymmetric,
    NotOnBoundary,
    NotSymmetric,
    SymmetryViolation,
    ZeroDirection,
)
from .geometry import (
    Polytope,
    apply_linear,
    gauge,
    gauge_many,
    polygon_area,
    support_point,
    support_value,
)
from .symmetry import SymmetryClass, classify_low_vertex_symmetric, is_tetrahedrally_symmetric

TOL_CERT = 1e-7
EQ_TOL = 1e-6

SQRT3 = math.sqrt(3.0)
PLANE_FLOOR = 1.5
SPACE_FLOOR = 2.0 / 3.0

# reference floors for the Rogers-Shephard chain (reported, not asserted):
# binom(2n,n)^-1 times the Kuperberg bound pi^n/n!, and times the resolved
# symmetric-Mahler constant 4^n/n! (sharp for n <= 3, giving 8/15 in 3D)
KUPERBERG_CHAIN_FLOOR = {2: (math.pi**2 / 2.0) / 6.0, 3: (math.pi**3 / 6.0) / 20.0}
RESOLVED_CHAIN_FLOOR = {2: 4.0 / 3.0, 3: 8.0 / 15.0}


@dataclass(frozen=True)
class Check:
    """One verified inequality: `ge` means lhs >= rhs - tol, `eq` means
    |lhs - rhs| <= tol.  tol None defers to the module TOL_CERT so CLI
    overrides take effect."""

    name: str
    lhs: float
    rhs: float
    kind: str = "ge"
    tol: float | None = None

    @property
    def tolerance(self) -> float:
        return TOL_CERT if self.tol is None else self.tol

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        if self.kind == "eq":
            return bool(abs(self.residual) <= self.tolerance)
        return bool(self.residual >= -self.tolerance)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "residual": float(self.residual),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class HexagonFrame:
    """u, v with u, v, u+v all on the boundary of a centrally symmetric
    polygon: the inscribed affine regular hexagon +-u, +-v, +-(u+v)."""

    u: np.ndarray
    v: np.ndarray
    gauges: tuple[float, float, float]


@dataclass
class Certificate2D:
    frame: HexagonFrame
    transform: np.ndarray
    S1: float
    S2: float
    S3: float
    chords: list
    containment_residuals: list
    zang_bounds: list
    certified_bound: float
    product: float
    valid: bool = False
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": "plane",
            "frame": {
                "u": self.frame.u.tolist(),
                "v": self.frame.v.tolist(),
                "gauges": list(self.frame.gauges),
            },
            "transform": self.transform.tolist(),
            "sector_areas": [self.S1, self.S2, self.S3],
            "chords": [c.tolist() for c in self.chords],
            "containment_residuals": list(self.containment_residuals),
            "zang_bounds": list(self.zang_bounds),
            "certified_bound": self.certified_bound,
            "product": self.product,
            "valid": self.valid,
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass
class Certificate3D:
    a: float
    b: float
    V1: float
    V2: float
    S_hex: float
    S_square: float
    case_tag: str
    estimate_values: dict
    certified_bound: float
    product: float
    valid: bool = False
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": "space",
            "a": self.a,
            "b": self.b,
            "V1": self.V1,
            "V2": self.V2,
            "S_hex": self.S_hex,
            "S_square": self.S_square,
            "case": self.case_tag,
            "estimates": self.estimate_values,
            "certified_bound": self.certified_bound,
            "product": self.product,
            "valid": self.valid,
            "checks": [c.to_dict() for c in self.checks],
        }


def _finish(cert, checks):
    cert.checks = checks
    bad = [c for c in checks if not c.passed]
    if bad:
        cert.valid = False
        err = CertificateInvalid(bad[0].name, bad[0].lhs, bad[0].rhs)
        err.certificate = cert
        raise err
    cert.valid = True
    return cert


def _boundary_point(L: Polytope, theta: float) -> np.ndarray:
    d = np.array([math.cos(theta), math.sin(theta)])
    return d / gauge(L, d)


def inscribe_affine_hexagon(L: Polytope, max_iter: int = 200) -> HexagonFrame:
    """Find u, v with u, v, u+v on the boundary of the centrally symmetric
    polygon L.

    u is the boundary point in direction (1, 0).  Walking the boundary arc
    from u to -u, gauge(L, p - u) grows continuously from 0 to 2, so
    bisection on g(theta) = gauge(L, p(theta) - u) - 1 lands on a point
    w = u + v with v on the boundary as well.  The returned frame is
    certified post hoc by its three gauge values.
    """
    if L.dim != 2:
        raise ValueError("hexagon inscription expects a 2D body")
    V = L.vertices
    if not _centrally_symmetric(V):
        raise NotCentrallySymmetric("hexagon inscription needs L = -L")
    u = _boundary_point(L, 0.0)
    lo, hi = 1e-9, math.pi
    g_lo = gauge(L, _boundary_point(L, lo) - u) - 1.0
    if g_lo > 0.0:
        raise NoConvergence("no bracket for hexagon inscription")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        g = gauge(L, _boundary_point(L, mid) - u) - 1.0
        if g < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14:
            break
    w = _boundary_point(L, hi)
    if abs(gauge(L, w - u) - 1.0) > TOL_CERT:
        raise NoConvergence("hexagon inscription did not converge")
    v = w - u
    gauges = (gauge(L, u), gauge(L, v), gauge(L, w))
    return HexagonFrame(u=u, v=v, gauges=gauges)


def _centrally_symmetric(V: np.ndarray, tol: float | None = None) -> bool:
    from .symmetry import _hausdorff_close, _match_threshold

    if tol is None:
        tol = TOL_CERT
    return _hausdorff_close(-V, V, max(_match_threshold(V, tol), 1e-300))


def _sector_area(L: Polytope, ray_a, ray_b) -> float:
    """Area of L between the rays from the origin through ray_a and ray_b
    (counterclockwise from ray_a to ray_b, angle < pi)."""
    a = np.asarray(ray_a, dtype=np.float64)
    b = np.asarray(ray_b, dtype=np.float64)
    verts = clip_polygon(L.vertices, np.array([a[1], -a[0]]), 0.0)
    if len(verts) < 3:
        return 0.0
    verts = clip_polygon(verts, np.array([-b[1], b[0]]), 0.0)
    if len(verts) < 3:
        return 0.0
    return abs(polygon_area(verts))


def certify_plane(K: Polytope) -> Certificate2D:
    """Re-execute the hexagon proof of |K||(K-K)deg| >= 3/2 on K.

    Inscribes an affine regular hexagon in L = (K-K)deg, maps the frame to
    +-(1,0), +-(0,1), +-(1,1) (transforming K contragradiently), splits L
    into six sectors, and verifies the three containments, the three chord
    inequalities |K| >= 1/(4 S_i), and the final bound
    product = 2|K|(S1+S2+S3) >= 6|K| min(S_i) >= 3/2.
    """
    if K.dim != 2:
        raise ValueError("certify_plane expects a 2D body")
    L0 = polar(difference_body(K))
    frame = inscribe_affine_hexagon(L0)
    A = np.stack([frame.u, frame.v], axis=1)  # columns u, v
    Kt = apply_linear(K, A.T)  # L transforms by A^{-1}: frame -> standard hexagon
    Dt = difference_body(Kt)
    Lt = polar(Dt)

    checks = []
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    e12 = np.array([1.0, 1.0])
    for name, w in (("hexagon_u", e1), ("hexagon_v", e2), ("hexagon_uv", e12)):
        checks.append(Check(name, gauge(Lt, w), 1.0, kind="eq"))

    S1 = _sector_area(Lt, e1, e12)
    S2 = _sector_area(Lt, e12, e2)
    S3 = _sector_area(Lt, e2, np.array([-1.0, 0.0]))
    area = Lt.volume
    checks.append(
        Check("sector_sum", 2.0 * (S1 + S2 + S3), area, kind="eq", tol=TOL_CERT * area)
    )

    dirs = (e1, e2, np.array([-1.0, 1.0]))
    sectors = (S1, S2, S3)
    containment_residuals = []
    for i, (d, S) in enumerate(zip(dirs, sectors), start=1):
        gval = gauge(Dt, d / (2.0 * S))
        containment_residuals.append(gval)
        checks.append(Check(f"containment_S{i}", 1.0, gval))

    chord_dirs = (e2, e1, e12)
    chords = [support_point(Dt, d) for d in chord_dirs]
    for i, d in enumerate(chord_dirs, start=1):
        checks.append(Check(f"chord_on_boundary_{i}", support_value(Dt, d), 1.0, kind="eq"))
    zang_bounds = [1.0 / (4.0 * S) for S in sectors]
    volK = Kt.volume
    for i, (chord, d, S) in enumerate(zip(chords, dirs, sectors), start=1):
        z = d / (2.0 * S)
        det = abs(chord[0] * z[1] - chord[1] * z[0])
        checks.append(Check(f"zang_chord_{i}", volK, 0.5 * det))
        checks.append(Check(f"zang_bound_{i}", volK, zang_bounds[i - 1]))

    certified = 6.0 * volK * min(sectors)
    product = 2.0 * volK * (S1 + S2 + S3)
    checks.append(Check("bound_floor", certified, PLANE_FLOOR))
    checks.append(Check("bound_vs_product", product, certified))

    cert = Certificate2D(
        frame=frame,
        transform=A,
        S1=S1,
        S2=S2,
        S3=S3,
        chords=chords,
        containment_residuals=containment_residuals,
        zang_bounds=zang_bounds,
        certified_bound=certified,
        product=product,
    )
    return _finish(cert, checks)


# the four partition planes of the 3D proof
_PARTITION_NORMALS = np.array(
    [(1.0, 1.0, 1.0), (1.0, -1.0, 1.0), (-1.0, 1.0, 1.0), (-1.0, -1.0, 1.0)]
)
_BLUE_MARKERS = np.array(
    [(sx, sy, sz) for sx in (1.0, -1.0) for sy in (1.0, -1.0) for sz in (1.0, -1.0)]
)
_RED_MARKERS = np.concatenate([np.eye(3), -np.eye(3)])


def _partition_cones():
    """The 14 full-dimensional sign-pattern cones of the four planes,
    tagged blue (diagonal direction) or red (axis direction)."""
    cones = []
    for marker, tag in [(m, "blue") for m in _BLUE_MARKERS] + [
        (m, "red") for m in _RED_MARKERS
    ]:
        signs = np.sign(_PARTITION_NORMALS @ marker)
        assert np.all(signs != 0.0)
        cones.append((signs, tag, marker))
    patterns = {tuple(s) for s, _, _ in cones}
    assert len(patterns) == 14
    return cones


_CONES = _partition_cones()


def partition_3d(Lp: Polytope):
    """Split a centrally + tetrahedrally symmetric body into the 14 pieces
    cut by the planes normal to (+-1, +-1, 1).

    Returns (V1, V2, pieces): V1 the total blue (diagonal cones) volume,
    V2 the total red (axis cones) volume, and one dict per piece.  Raises
    SymmetryViolation when congruent pieces disagree beyond TOL_CERT or
    the pieces fail to tile Lp.
    """
    if Lp.dim != 3:
        raise ValueError("partition_3d expects a 3D body")
    pieces = []
    for signs, tag, marker in _CONES:
        vol = cone_volume(Lp, signs[:, None] * _PARTITION_NORMALS)
        pieces.append({"marker": marker.tolist(), "tag": tag, "volume": vol})
    blue = np.array([p["volume"] for p in pieces if p["tag"] == "blue"])
    red = np.array([p["volume"] for p in pieces if p["tag"] == "red"])
    V1 = float(np.sum(blue))
    V2 = float(np.sum(red))
    for name, arr in (("blue", blue), ("red", red)):
        mean = float(np.mean(arr))
        if np.max(np.abs(arr - mean)) > TOL_CERT * (1.0 + mean):
            raise SymmetryViolation(f"{name} piece volumes disagree beyond tolerance")
    if abs(V1 + V2 - Lp.volume) > TOL_CERT * (1.0 + Lp.volume):
        raise SymmetryViolation("partition pieces do not tile the body")
    return V1, V2, pieces


def section_areas(Lp: Polytope):
    """S_hex = |Lp cap (1,1,1)-perp| / 6 and S_square = |Lp cap e3-perp| / 4."""
    hex_area = central_section(Lp, PlaneBasis(np.array([1.0, 1.0, 1.0]))).volume
    sq_area = central_section(Lp, PlaneBasis(np.array([0.0, 0.0, 1.0]))).volume
    return hex_area / 6.0, sq_area / 4.0


def certify_space(K: Polytope) -> Certificate3D:
    """Re-execute the 14-piece partition proof of |K||(K-K)deg| >= 2/3 for
    a tetrahedrally symmetric 3D body.

    Verifies the boundary scalings of a(1,1,1) and b(0,0,1), the two
    projection bounds from the hexagonal and square central sections, the
    three convex-hull inclusion bounds, the three volume estimates, and the
    final three-way case analysis.
    """
    if K.dim != 3:
        raise ValueError("certify_space expects a 3D body")
    if not is_tetrahedrally_symmetric(K, tol=TOL_CERT):
        raise NotSymmetric("certify_space needs tetrahedral symmetry")
    D = difference_body(K)
    Lp = polar(D)
    diag = np.array([1.0, 1.0, 1.0])
    axis = np.array([0.0, 0.0, 1.0])
    a = 1.0 / gauge(Lp, diag)
    b = 1.0 / gauge(Lp, axis)

    checks = [
        Check("boundary_a_diag", gauge(Lp, a * diag), 1.0, kind="eq"),
        Check("boundary_b_axis", gauge(Lp, b * axis), 1.0, kind="eq"),
        Check("difference_boundary_diag", gauge(D, diag / (3.0 * a)), 1.0, kind="eq"),
        Check("difference_boundary_axis", gauge(D, axis / b), 1.0, kind="eq"),
    ]

    V1, V2, pieces = partition_3d(Lp)
    S_hex, S_square = section_areas(Lp)
    volLp = Lp.volume
    volK = K.volume
    checks.append(
        Check("tiling", V1 + V2, volLp, kind="eq", tol=TOL_CERT * (1.0 + volLp))
    )

    proj_sq = project(K, PlaneBasis(axis)).volume
    proj_hex = project(K, PlaneBasis(diag)).volume
    checks.append(Check("projection_square", proj_sq, 1.0 / (2.0 * S_square)))
    checks.append(Check("projection_hexagon", proj_hex, 1.0 / (4.0 * S_hex)))

    checks.append(Check("inclusion_blue", V1 / 8.0, a * S_hex / SQRT3))
    checks.append(Check("inclusion_red", V2 / 6.0, (4.0 / (3.0 * SQRT3)) * S_hex * b))
    checks.append(Check("inclusion_total", volLp / 8.0, a * S_square))

    est1 = volK * V1
    est2 = volK * V2
    est3 = volK * volLp
    est2_floor = (4.0 / (3.0 * SQRT3)) * S_hex / S_square
    est3_floor = (2.0 / (3.0 * SQRT3)) * S_square / S_hex
    checks.append(Check("estimate_1", est1, 2.0 / 9.0))
    checks.append(Check("estimate_2", est2, est2_floor))
    checks.append(Check("estimate_3", est3, est3_floor))

    product = volK * volLp
    if V2 >= 2.0 * V1:
        case = "Case1"
        certified = 3.0 * volK * V1
    elif S_hex / S_square >= 1.0 / SQRT3:
        case = "Case2"
        certified = 1.5 * volK * V2
    else:
        case = "Case3"
        certified = 0.5 * (est1 + est2 + est3)
        checks.append(Check("case3_condition", S_square / S_hex, SQRT3))
    checks.append(Check("bound_floor", certified, SPACE_FLOOR))
    checks.append(Check("bound_vs_product", product, certified))

    cert = Certificate3D(
        a=a,
        b=b,
        V1=V1,
        V2=V2,
        S_hex=S_hex,
        S_square=S_square,
        case_tag=case,
        estimate_values={
            "K_V1": est1,
            "K_V1_floor": 2.0 / 9.0,
            "K_V2": est2,
            "K_V2_floor": est2_floor,
            "K_Lp": est3,
            "K_Lp_floor": est3_floor,
        },
        certified_bound=certified,
        product=product,
    )
    return _finish(cert, checks)


def check_zang(K: Polytope, u, D: Polytope | None = None):
    """Zang's inequality |K| >= (1/n)|u| |Pr_{u-perp} K| for u on the
    boundary of K - K.  Returns (holds, margin)."""
    u = np.asarray(u, dtype=np.float64)
    if float(np.linalg.norm(u)) < 1e-15:
        raise ZeroDirection("zero direction")
    if D is None:
        D = difference_body(K)
    g = gauge(D, u)
    if abs(g - 1.0) > TOL_CERT:
        raise NotOnBoundary(f"u has gauge {g}, expected 1")
    ulen = float(np.linalg.norm(u))
    if K.dim == 2:
        w = np.array([-u[1], u[0]]) / ulen
        width = support_value(K, w) + support_value(K, -w)
        margin = K.volume - 0.5 * ulen * width
    else:
        shadow = project(K, PlaneBasis(u)).volume
        margin = K.volume - (ulen * shadow) / 3.0
    return margin >= -TOL_CERT, margin


def zang_margins(K: Polytope, n_dirs: int, seed: int) -> np.ndarray:
    """Zang margins at n_dirs seeded boundary directions of K - K, using
    the facet-shadow formula |Pr K| = (1/4) sum_f |<n_f, u>| (exact for
    polytopes and equal to the projected-hull area used by check_zang)."""
    D = difference_body(K)
    rng = np.random.Generator(np.random.PCG64(seed))
    dirs = rng.normal(size=(n_dirs, K.dim))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    glen = gauge_many(D, dirs)
    ulen = 1.0 / glen  # |u| for u = dir/gauge on the boundary
    if K.dim == 2:
        # width along rot90(u) = (1/2) sum_e |<n_e, u>| with |n_e| = edge length
        n = K.planes[:, :2]
        widths = 0.5 * np.sum(np.abs(dirs @ n.T), axis=1)
        return K.volume - 0.5 * ulen * widths
    n = K.planes[:, :3]
    shadows = 0.25 * np.sum(np.abs(dirs @ n.T), axis=1)
    return K.volume - (ulen * shadows) / 3.0


def check_section_projection_duality(K: Polytope, u) -> float:
    """Symmetric-difference area between (K-K)deg cap u-perp and the polar
    (inside u-perp) of Pr_{u-perp}(K - K).  Near zero by duality."""
    u = np.asarray(u, dtype=np.float64)
    if float(np.linalg.norm(u)) < 1e-15:
        raise ZeroDirection("zero direction")
    basis = PlaneBasis(u)
    D = difference_body(K)
    Lp = polar(D)
    section = central_section(Lp, basis)
    proj_polar = polar(project(D, basis))
    inter = convex_polygon_intersection_area(section, proj_polar)
    return section.volume + proj_polar.volume - 2.0 * inter


def chain_lower_bound(K: Polytope):
    """Rogers-Shephard chain: (value, rs_ratio) with
    value = binom(2n, n)^{-1} |K-K| |(K-K)deg| <= |K||(K-K)deg| and
    rs_ratio = |K-K| / |K| <= binom(2n, n)."""
    D = difference_body(K)
    Lp = polar(D)
    binom = math.comb(2 * K.dim, K.dim)
    value = D.volume * Lp.volume / binom
    rs_ratio = D.volume / K.volume
    return value, rs_ratio


def detect_equality_2d(K: Polytope, eq_tol: float = EQ_TOL) -> bool:
    """True iff K numerically attains the planar bound (triangle case)."""
    from .bodies import volume_product

    return volume_product(K) <= PLANE_FLOOR + eq_tol and len(K.vertices) == 3


def detect_equality_3d(K: Polytope, eq_tol: float = EQ_TOL) -> bool:
    """True iff a tetrahedrally symmetric K numerically attains the 3D
    bound and classifies as a tetrahedron."""
    from .bodies import volume_product

    if volume_product(K) > SPACE_FLOOR + eq_tol:
        return False
    return classify_low_vertex_symmetric(K) is SymmetryClass.TETRAHEDRON
