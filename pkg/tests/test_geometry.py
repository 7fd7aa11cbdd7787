"""Polytope primitives: hulls, volumes, representations, supports, gauges."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import volprod as vp
from volprod import (
    Halfspace,
    apply_linear,
    contains,
    convex_hull,
    gauge,
    halfspace_to_vertex,
    support_point,
    support_value,
    vertex_to_halfspace,
)
from volprod.errors import (
    DegenerateInput,
    EmptyRegion,
    OriginNotInterior,
    SingularMatrix,
    UnboundedRegion,
    ZeroDirection,
)
from volprod.geometry import body_from_dict, body_to_dict, same_vertex_set

from conftest import random_matrix


def test_hull_removes_interior_point():
    P = convex_hull([(0, 0), (1, 0), (0, 1), (0.25, 0.25)], 2)
    assert len(P.vertices) == 3


def test_hull_cube_corners_all_extreme(cube):
    assert len(cube.vertices) == 8
    assert cube.volume == pytest.approx(8.0, abs=1e-9)


def test_hull_collinear_raises():
    with pytest.raises(DegenerateInput):
        convex_hull([(0, 0), (1, 0), (2, 0)], 2)


def test_volume_triangle(triangle):
    assert triangle.volume == pytest.approx(0.5, abs=1e-12)


def test_volume_tetrahedron(tet):
    # cube of volume 8 minus four corner tetrahedra of volume 4/3 each
    assert tet.volume == pytest.approx(8.0 / 3.0, abs=1e-9)


def test_halfspace_roundtrip_square(square):
    hs = vertex_to_halfspace(square)
    assert len(hs) == 4
    back = halfspace_to_vertex(hs, 2)
    assert same_vertex_set(square, back, tol=1e-7)


def test_halfspace_to_vertex_triangle():
    hs = [Halfspace([1.0, 1.0], 1.0), Halfspace([-1.0, 0.0], 0.0), Halfspace([0.0, -1.0], 0.0)]
    P = halfspace_to_vertex(hs, 2)
    want = convex_hull([(0, 0), (1, 0), (0, 1)], 2)
    assert same_vertex_set(P, want, tol=1e-7)


def test_halfspace_unbounded():
    with pytest.raises(UnboundedRegion):
        halfspace_to_vertex([Halfspace([1.0, 0.0], 1.0)], 2)


def test_halfspace_empty():
    hs = [
        Halfspace([1.0, 0.0], -2.0),
        Halfspace([-1.0, 0.0], -2.0),
        Halfspace([0.0, 1.0], 1.0),
        Halfspace([0.0, -1.0], 1.0),
    ]
    with pytest.raises(EmptyRegion):
        halfspace_to_vertex(hs, 2)


def test_halfspace_roundtrip_3d(cube, tet):
    for P in (cube, tet):
        back = halfspace_to_vertex(vertex_to_halfspace(P), 3)
        assert same_vertex_set(P, back, tol=1e-7)


def test_support(square, triangle, tet):
    assert support_value(square, np.array([1.0, 0.0])) == pytest.approx(1.0)
    p = support_point(square, np.array([1.0, 0.0]))
    assert p[0] == pytest.approx(1.0)
    assert support_value(triangle, np.array([1.0, 1.0])) == pytest.approx(1.0)
    assert support_value(tet, np.array([1.0, 1.0, 1.0])) == pytest.approx(1.0, abs=1e-9)


def test_support_zero_direction(square):
    with pytest.raises(ZeroDirection):
        support_value(square, np.array([0.0, 0.0]))


def test_gauge(square):
    assert gauge(square, np.array([0.5, 0.0])) == pytest.approx(0.5, abs=1e-12)
    assert gauge(square, np.array([2.0, 2.0])) == pytest.approx(2.0, abs=1e-12)
    hexagon = convex_hull([(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)], 2)
    assert gauge(hexagon, np.array([1.0, 1.0])) == pytest.approx(1.0, abs=1e-12)


def test_gauge_needs_interior_origin(triangle):
    shifted = convex_hull(triangle.vertices + 5.0, 2)
    with pytest.raises(OriginNotInterior):
        gauge(shifted, np.array([1.0, 0.0]))


def test_contains(cube):
    assert contains(cube, np.array([0.0, 0.0, 0.0]))
    assert contains(cube, np.array([1.0 + 1e-12, 0.0, 0.0]), tol=1e-9)
    assert not contains(cube, np.array([1.1, 0.0, 0.0]), tol=1e-9)


def test_apply_linear(square, triangle):
    doubled = apply_linear(square, 2.0 * np.eye(2))
    assert doubled.volume == pytest.approx(16.0, abs=1e-9)
    same = apply_linear(triangle, np.eye(2))
    assert same_vertex_set(same, triangle, tol=1e-9)
    shear = apply_linear(square, np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert shear.volume == pytest.approx(4.0, abs=1e-9)
    with pytest.raises(SingularMatrix):
        apply_linear(square, np.zeros((2, 2)))


def test_volume_scales_with_determinant(cube, tet):
    rng = np.random.default_rng(7)
    for P in (cube, tet):
        for _ in range(10):
            M = random_matrix(rng, 3)
            img = apply_linear(P, M)
            assert img.volume == pytest.approx(abs(np.linalg.det(M)) * P.volume, rel=1e-9)


def test_hull_idempotent(cube, tet, gon64):
    for P in (cube, tet, gon64):
        again = convex_hull(P.vertices, P.dim)
        assert same_vertex_set(P, again, tol=1e-9)


def test_body_file_roundtrip(tmp_path, tet):
    path = tmp_path / "tet.json"
    vp.dump_body(tet, path)
    back = vp.load_body(path)
    assert same_vertex_set(tet, back, tol=1e-9)
    assert body_from_dict(body_to_dict(tet)).volume == pytest.approx(tet.volume, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_gauge_contains_consistency(seed):
    rng = np.random.default_rng(seed)
    dim = 2 if seed % 2 else 3
    pts = rng.normal(size=(dim + 5, dim))
    try:
        P = convex_hull(pts, dim)
    except DegenerateInput:
        return
    centroid = P.vertices.mean(axis=0)
    P = convex_hull(P.vertices - centroid, dim)
    xs = rng.normal(size=(200, dim)) * 0.8
    for x in xs:
        g = gauge(P, x)
        assert contains(P, x, tol=1e-9) == (g <= 1.0 + 1e-9) or abs(g - 1.0) < 1e-7


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_support_point_gauge_scaling(seed):
    rng = np.random.default_rng(seed)
    dim = 2 if seed % 2 else 3
    pts = rng.normal(size=(dim + 6, dim))
    try:
        P = convex_hull(pts, dim)
    except DegenerateInput:
        return
    centroid = P.vertices.mean(axis=0)
    P = convex_hull(P.vertices - centroid, dim)
    u = rng.normal(size=dim)
    v = support_point(P, u)
    for s in (0.5, 1.0, 2.0):
        assert gauge(P, v * s) == pytest.approx(s, rel=1e-7, abs=1e-10)
