#!/usr/bin/env python3
"""Benchmark the compiled hull kernels against the pure-Python fallback.

Verifies that both backends return bit-identical hulls, then times them on
representative workloads: raw 3D hulls at several sizes, 2D hulls, and the
end-to-end volume-product evaluation that dominates the minimizer search.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

import volprod
import volprod._kernels_py as kpy
import volprod.geometry as geo

try:
    import volprod._kernels_cy as kcy
except ImportError:
    kcy = None


def prep(pts):
    scale = 1.0 + geo.bbox_diameter(pts)
    eps = geo.TOL_GEOM * scale
    spts = geo._sorted_unique(pts, eps)
    jpts = spts + geo._joggle_block(0, len(spts)) * (geo._JOGGLE * scale)
    return spts, jpts, eps


def bench(fn, reps):
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def main():
    rng = np.random.default_rng(2024)
    print(f"active backend: {volprod.backend_name()}")
    if kcy is None:
        print("compiled kernel not available; showing the fallback only")

    print("\n-- correctness: bit-identical outputs --")
    checked = 0
    for trial in range(60):
        m = int(rng.integers(10, 400))
        if trial % 2:
            pts = rng.normal(size=(m, 3))
        else:
            pts = rng.integers(-4, 5, size=(m, 3)).astype(float)
        spts, jpts, eps = prep(pts)
        rp = kpy.hull3d(spts, jpts, eps)
        if kcy is not None:
            rc = kcy.hull3d(spts, jpts, eps)
            assert np.array_equal(rp[0], rc[0]) and rp[1].tobytes() == rc[1].tobytes()
            p2 = geo._sorted_unique(pts[:, :2], eps)
            assert np.array_equal(kpy.hull2d(p2), kcy.hull2d(p2))
        checked += 1
    print(f"   {checked} random hulls identical across backends")

    print("\n-- raw hull3d --")
    for m in (50, 200, 800):
        pts = rng.normal(size=(m, 3))
        spts, jpts, eps = prep(pts)
        tp = bench(lambda: kpy.hull3d(spts, jpts, eps), 8)
        line = f"   n={m:4d}  python {tp * 1e3:8.2f} ms"
        if kcy is not None:
            tc = bench(lambda: kcy.hull3d(spts, jpts, eps), 50)
            line += f"   cython {tc * 1e3:8.3f} ms   speedup {tp / tc:6.1f}x"
        print(line)

    print("\n-- raw hull2d --")
    pts2 = rng.normal(size=(2000, 2))
    s2 = geo._sorted_unique(pts2, 1e-9)
    tp = bench(lambda: kpy.hull2d(s2), 20)
    line = f"   n=2000  python {tp * 1e3:8.2f} ms"
    if kcy is not None:
        tc = bench(lambda: kcy.hull2d(s2), 200)
        line += f"   cython {tc * 1e3:8.3f} ms   speedup {tp / tc:6.1f}x"
    print(line)

    print("\n-- end-to-end volume_product (search workload) --")
    body = volprod.random_body("tetra", 2, seed=3)
    t_active = bench(lambda: volprod.volume_product(body), 60)
    print(f"   active backend ({volprod.backend_name()}): {t_active * 1e3:.2f} ms per evaluation")
    print("   (set VOLPROD_PURE=1 and rerun to time the same workload on the fallback)")


if __name__ == "__main__":
    main()
