"""Backend equivalence and raw hull robustness."""

import numpy as np
import pytest

import volprod._kernels_py as kpy
import volprod.geometry as geo
from volprod import convex_hull
from volprod.errors import DegenerateInput
from volprod.kernels import backend_name

try:
    import volprod._kernels_cy as kcy
except ImportError:
    kcy = None


def _prep(pts):
    scale = 1.0 + geo.bbox_diameter(pts)
    eps = geo.TOL_GEOM * scale
    spts = geo._sorted_unique(pts, eps)
    jpts = spts + geo._joggle_block(0, len(spts)) * (geo._JOGGLE * scale)
    return spts, jpts, eps


def _point_clouds(seed, count):
    rng = np.random.default_rng(seed)
    for trial in range(count):
        kind = trial % 5
        m = int(rng.integers(8, 200))
        if kind == 0:
            yield rng.normal(size=(m, 3))
        elif kind == 1:
            pts = rng.normal(size=(m, 3))
            yield pts / np.linalg.norm(pts, axis=1)[:, None]
        elif kind == 2:
            yield rng.integers(-3, 4, size=(m, 3)).astype(float)
        elif kind == 3:
            base = rng.normal(size=(max(m // 5, 4), 3))
            idx = rng.integers(0, len(base), size=m)
            yield base[idx] + 1e-8 * rng.normal(size=(m, 3))
        else:
            pts = rng.uniform(-1, 1, size=(m, 3))
            ax = rng.integers(0, 3, size=m)
            sgn = rng.choice([-1.0, 1.0], size=m)
            pts[np.arange(m), ax] = sgn
            yield pts


@pytest.mark.skipif(kcy is None, reason="compiled kernel not built")
def test_backends_bit_identical():
    for pts in _point_clouds(99, 80):
        spts, jpts, eps = _prep(pts)
        rp = kpy.hull3d(spts, jpts, eps)
        rc = kcy.hull3d(spts, jpts, eps)
        assert np.array_equal(rp[0], rc[0])
        assert rp[1].tobytes() == rc[1].tobytes()
        p2 = geo._sorted_unique(pts[:, :2], eps)
        assert np.array_equal(kpy.hull2d(p2), kcy.hull2d(p2))


def test_active_backend_reported():
    assert backend_name() in ("cython", "python")


def test_hull_surface_encloses_all_points():
    for pts in _point_clouds(3, 40):
        spts, jpts, eps = _prep(pts)
        tris, planes = kpy.hull3d(spts, jpts, eps)
        lens = np.sqrt(np.sum(planes[:, :3] ** 2, axis=1))
        solid = lens > 1e-8
        d = (jpts @ planes[solid, :3].T - planes[solid, 3]) / lens[solid]
        assert d.max() <= 10 * eps
        # closed oriented surface: every directed edge matched by its twin
        de = {}
        for t in tris:
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                assert (a, b) not in de
                de[(a, b)] = True
        for a, b in de:
            assert (b, a) in de


def test_hull3d_flat_input_is_degenerate():
    pts = np.random.default_rng(0).normal(size=(30, 3))
    pts[:, 2] = 0.0
    spts, jpts, eps = _prep(pts)
    assert kpy.hull3d(spts, jpts, eps) is None
    with pytest.raises(DegenerateInput):
        convex_hull(pts, 3)


def test_hull2d_collinear_middle_points_dropped():
    pts = np.array([[0.0, 0.0], [0.5, 0.0], [1.0, 0.0], [0.0, 1.0]])
    spts = geo._sorted_unique(pts, 1e-9)
    idx = kpy.hull2d(spts)
    assert len(idx) == 3


def test_hull2d_collinear_only_is_degenerate():
    with pytest.raises(DegenerateInput):
        convex_hull([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], 2)
