"""Proof re-execution: hexagon frames, 2D/3D certificates, standalone
inequality checks, and equality-case detection."""

import math

import numpy as np
import pytest

import volprod as vp
from volprod import (
    certify_plane,
    certify_space,
    chain_lower_bound,
    check_section_projection_duality,
    check_zang,
    convex_hull,
    detect_equality_2d,
    detect_equality_3d,
    difference_body,
    inscribe_affine_hexagon,
    partition_3d,
    polar,
    section_areas,
    symmetrize_orbit,
    volume_product,
)
from volprod.certificates import KUPERBERG_CHAIN_FLOOR, RESOLVED_CHAIN_FLOOR, zang_margins
from volprod.errors import CertificateInvalid, NotCentrallySymmetric, NotOnBoundary, NotSymmetric

SQRT3 = math.sqrt(3.0)


def frame_gauges_are_one(L, frame):
    for w in (frame.u, frame.v, frame.u + frame.v):
        assert vp.gauge(L, w) == pytest.approx(1.0, abs=1e-7)


def test_hexagon_in_hexagon(triangle):
    L = polar(difference_body(triangle))
    frame = inscribe_affine_hexagon(L)
    frame_gauges_are_one(L, frame)
    det = frame.u[0] * frame.v[1] - frame.u[1] * frame.v[0]
    assert abs(det) > 1e-9


def test_hexagon_in_square(square):
    frame = inscribe_affine_hexagon(square)
    frame_gauges_are_one(square, frame)


def test_hexagon_in_64gon_close_to_disk(gon64):
    frame = inscribe_affine_hexagon(gon64)
    frame_gauges_are_one(gon64, frame)
    # the disk solution has |u| = |v| = |u+v| = 1
    for w in (frame.u, frame.v, frame.u + frame.v):
        assert np.linalg.norm(w) == pytest.approx(1.0, abs=2e-3)


def test_hexagon_needs_central_symmetry(triangle):
    with pytest.raises(NotCentrallySymmetric):
        inscribe_affine_hexagon(triangle)


def test_certify_plane_triangle(triangle):
    cert = certify_plane(triangle)
    assert cert.valid
    for S in (cert.S1, cert.S2, cert.S3):
        assert S == pytest.approx(0.5, abs=1e-7)
    assert cert.certified_bound == pytest.approx(1.5, abs=1e-7)
    assert cert.product == pytest.approx(1.5, abs=1e-9)
    assert all(c.passed for c in cert.checks)


def test_certify_plane_square(square):
    cert = certify_plane(square)
    assert cert.valid
    assert cert.product == pytest.approx(2.0, abs=1e-9)
    assert cert.certified_bound >= 1.5 - 1e-7
    assert cert.certified_bound <= cert.product + 1e-7


def test_certify_plane_64gon(gon64):
    cert = certify_plane(gon64)
    assert cert.valid
    exact = 512.0 * math.sin(math.pi / 32.0) * math.tan(math.pi / 64.0)
    assert cert.product == pytest.approx(exact, rel=1e-9)
    assert abs(cert.product - math.pi**2 / 4.0) / (math.pi**2 / 4.0) < 0.01


def test_certificate_2d_serialization(triangle):
    d = certify_plane(triangle).to_dict()
    assert d["kind"] == "plane"
    assert len(d["checks"]) >= 10
    for c in d["checks"]:
        assert set(c) == {"name", "lhs", "rhs", "residual", "pass"}
        assert c["pass"]


def test_certify_space_tet(tet):
    cert = certify_space(tet)
    assert cert.valid
    assert cert.a == pytest.approx(0.25, abs=1e-7)
    assert cert.b == pytest.approx(0.5, abs=1e-7)
    assert cert.V1 == pytest.approx(1.0 / 12.0, rel=1e-7)
    assert cert.V2 == pytest.approx(1.0 / 6.0, rel=1e-7)
    assert cert.S_hex == pytest.approx(SQRT3 / 24.0, rel=1e-7)
    assert cert.S_square == pytest.approx(0.125, rel=1e-7)
    assert cert.product == pytest.approx(2.0 / 3.0, abs=1e-9)
    assert 2.0 / 3.0 - 1e-7 <= cert.certified_bound <= cert.product + 1e-7


def test_certify_space_cube_octa(cube, octa):
    cert = certify_space(cube)
    assert cert.valid
    assert cert.product == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert cert.V1 == pytest.approx(1.0 / 24.0, rel=1e-7)
    assert cert.V2 == pytest.approx(0.125, rel=1e-7)
    cert = certify_space(octa)
    assert cert.valid
    assert cert.product == pytest.approx(4.0 / 3.0, abs=1e-9)


def test_certify_space_orbit_bodies():
    # an axis generator inside the tetrahedron is swallowed by the hull, so
    # that body IS the tetrahedron; a protruding one gives a 10-vertex body
    # with a strictly larger product
    K = symmetrize_orbit([np.array([1.0, 1.0, -1.0]), np.array([0.9, 0.0, 0.0])])
    cert = certify_space(K)
    assert cert.valid
    assert cert.product == pytest.approx(2.0 / 3.0, abs=1e-9)
    K = symmetrize_orbit([np.array([1.0, 1.0, -1.0]), np.array([1.2, 0.0, 0.0])])
    cert = certify_space(K)
    assert cert.valid
    assert cert.product > 2.0 / 3.0 + 1e-3


def test_certify_space_rejects_asymmetric(cube):
    skew = convex_hull(cube.vertices * np.array([1.0, 1.0, 1.7]), 3)
    with pytest.raises(NotSymmetric):
        certify_space(skew)


def test_partition_tet(tet):
    Lp = polar(difference_body(tet))
    V1, V2, pieces = partition_3d(Lp)
    assert V1 + V2 == pytest.approx(0.25, rel=1e-9)
    assert len(pieces) == 14
    blue = [p["volume"] for p in pieces if p["tag"] == "blue"]
    red = [p["volume"] for p in pieces if p["tag"] == "red"]
    assert len(blue) == 8 and len(red) == 6
    assert max(blue) - min(blue) <= 1e-9 * (1 + np.mean(blue))
    assert max(red) - min(red) <= 1e-9 * (1 + np.mean(red))


def test_partition_cube_tiles(cube):
    V1, V2, _ = partition_3d(cube)
    assert V1 + V2 == pytest.approx(8.0, rel=1e-9)


def test_partition_octahedron(octa):
    # red piece = {z >= |x| + |y|} inside {|x|+|y|+|z| <= 1}: slabs of area
    # 2 min(z, 1-z)^2 integrate to 1/6
    V1, V2, _ = partition_3d(octa)
    assert V2 == pytest.approx(1.0, rel=1e-9)
    assert V1 == pytest.approx(1.0 / 3.0, rel=1e-9)
    assert V1 + V2 == pytest.approx(4.0 / 3.0, rel=1e-9)


def test_section_areas(tet, cube):
    Lp = polar(difference_body(tet))
    S_hex, S_sq = section_areas(Lp)
    assert S_sq == pytest.approx(0.125, rel=1e-9)
    assert S_hex == pytest.approx(SQRT3 / 24.0, rel=1e-9)
    S_hex, S_sq = section_areas(cube)
    assert S_sq == pytest.approx(1.0, rel=1e-9)
    # hexagonal section of [-1,1]^3 through the origin: regular, side sqrt(2)
    assert S_hex == pytest.approx(SQRT3 / 2.0, rel=1e-9)


def test_check_zang_named(triangle, tet, cube):
    holds, margin = check_zang(triangle, np.array([1.0, 0.0]))
    assert holds and margin == pytest.approx(0.0, abs=1e-9)
    holds, margin = check_zang(tet, np.array([2.0, 2.0, 0.0]))
    assert holds and margin == pytest.approx(0.0, abs=1e-7)
    holds, margin = check_zang(cube, np.array([2.0, 0.0, 0.0]))
    assert holds and margin == pytest.approx(16.0 / 3.0, rel=1e-7)


def test_check_zang_requires_boundary(triangle):
    with pytest.raises(NotOnBoundary):
        check_zang(triangle, np.array([0.2, 0.0]))


def test_zang_margins_match_single_checks(triangle, tet):
    for K in (triangle, tet):
        D = difference_body(K)
        rng = np.random.Generator(np.random.PCG64(77))
        dirs = rng.normal(size=(15, K.dim))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        for d in dirs:
            u = d / vp.gauge(D, d)
            _, margin = check_zang(K, u, D=D)
            assert margin >= -1e-7
        ms = zang_margins(K, 200, seed=5)
        assert ms.min() >= -1e-7


def test_duality_named(tet, cube):
    for K in (tet, cube):
        for u in (np.array([0.0, 0.0, 1.0]), np.array([1.0, 1.0, 1.0])):
            resid = check_section_projection_duality(K, u)
            assert resid <= 1e-9 * 4.0


def test_duality_random_bodies():
    rng = np.random.default_rng(13)
    for _ in range(5):
        K = symmetrize_orbit(rng.uniform(-1, 1, size=(2, 3)))
        u = rng.normal(size=3)
        Lp = polar(difference_body(K))
        from volprod.bodies import PlaneBasis, central_section

        area = central_section(Lp, PlaneBasis(u)).volume
        resid = check_section_projection_duality(K, u)
        assert resid <= 1e-9 * area


def test_chain_lower_bound(triangle, tet):
    value, ratio = chain_lower_bound(triangle)
    assert ratio == pytest.approx(6.0, rel=1e-9)
    assert value == pytest.approx(1.5, rel=1e-9)
    value, ratio = chain_lower_bound(tet)
    assert ratio == pytest.approx(20.0, rel=1e-9)
    assert value == pytest.approx(2.0 / 3.0, rel=1e-9)
    assert RESOLVED_CHAIN_FLOOR[3] == pytest.approx(8.0 / 15.0)
    assert KUPERBERG_CHAIN_FLOOR[3] == pytest.approx(math.pi**3 / 120.0)


def test_chain_below_product():
    rng = np.random.default_rng(3)
    for _ in range(10):
        K = convex_hull(rng.normal(size=(8, 2)), 2)
        value, ratio = chain_lower_bound(K)
        assert value <= volume_product(K) + 1e-7
        assert ratio <= 6.0 + 1e-9


def test_equality_detection(triangle, square, tet, octa):
    assert detect_equality_2d(triangle)
    assert not detect_equality_2d(square)
    assert detect_equality_3d(tet)
    assert not detect_equality_3d(octa)
    scaled = convex_hull(0.37 * triangle.vertices, 2)
    assert detect_equality_2d(scaled)


def test_case3_closed_form():
    # (1/2)(2/9 + (4/(3 sqrt3))/t + (2/(3 sqrt3)) t) >= 2/3 for t >= sqrt3
    ts = np.linspace(SQRT3, 60.0, 4000)
    vals = 0.5 * (2.0 / 9.0 + (4.0 / (3.0 * SQRT3)) / ts + (2.0 / (3.0 * SQRT3)) * ts)
    assert vals.min() >= 2.0 / 3.0 - 1e-12
    at_sqrt3 = 0.5 * (2.0 / 9.0 + (4.0 / (3.0 * SQRT3)) / SQRT3 + (2.0 / (3.0 * SQRT3)) * SQRT3)
    assert at_sqrt3 == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_certificate_invalid_carries_payload(triangle):
    from volprod.certificates import Check, _finish

    cert = certify_plane(triangle)
    bad = [Check("fine", 1.0, 0.0), Check("broken_inequality", 0.0, 1.0)]
    with pytest.raises(CertificateInvalid) as err:
        _finish(cert, bad)
    assert err.value.check_name == "broken_inequality"
    assert err.value.certificate is cert
    assert not cert.valid


def test_sector_sum_is_half_area():
    rng = np.random.default_rng(21)
    for _ in range(10):
        K = convex_hull(rng.normal(size=(7, 2)), 2)
        cert = certify_plane(K)
        sector_sum = next(c for c in cert.checks if c.name == "sector_sum")
        assert sector_sum.passed
        assert sector_sum.lhs == pytest.approx(sector_sum.rhs, rel=1e-7)
        assert cert.certified_bound <= cert.product + 1e-7
