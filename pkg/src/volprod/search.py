"""Derivative-free minimization of the volume product over two body
classes (free polygons, tetrahedrally symmetric orbit hulls) and the
Santalo-point computation for the translate-minimized product P(K).

Everything is deterministic for a fixed SearchConfig: restart r uses the
substream SeedSequence(seed).spawn(restarts)[r], restarts are merged in
index order, and serialized reports are byte-stable.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bodies import polar, translate, volume_product
from .errors import DegenerateInput, GeometryError, NoConvergence
from .geometry import Polytope, body_to_dict, convex_hull, gauge
from .symmetry import symmetrize_orbit

POLYGON_FLOOR = 1.5
TETRA_FLOOR = 2.0 / 3.0

_TEMP_PERIOD = 50  # iterations between temperature decays
_STREAK_LIMIT = 25  # consecutive rejections before the step shrinks


@dataclass(frozen=True)
class SearchConfig:
    body_class: str  # "polygon" or "tetra"
    class_param: int  # polygon vertex count / orbit generator count
    restarts: int = 10
    max_iters: int = 2000
    initial_step: float = 0.25
    cooling: float = 0.93
    seed: int = 0

    def __post_init__(self):
        if self.body_class not in ("polygon", "tetra"):
            raise ValueError(f"unknown body class {self.body_class!r}")
        if self.class_param < (3 if self.body_class == "polygon" else 1):
            raise ValueError("class_param too small")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not (0.0 < self.cooling < 1.0):
            raise ValueError("cooling must lie in (0, 1)")

    def to_dict(self) -> dict:
        return {
            "class": f"{self.body_class}:{self.class_param}",
            "restarts": self.restarts,
            "max_iters": self.max_iters,
            "initial_step": self.initial_step,
            "cooling": self.cooling,
            "seed": self.seed,
        }

    @property
    def floor(self) -> float:
        return POLYGON_FLOOR if self.body_class == "polygon" else TETRA_FLOOR


@dataclass
class SearchReport:
    config: SearchConfig
    best_body: Polytope
    best_product: float
    trajectory: list  # (global iteration, best product so far), non-increasing
    restart_summaries: list
    min_evaluated: float

    def to_dict(self, max_trajectory: int = 1000) -> dict:
        traj = self.trajectory
        if len(traj) > max_trajectory:
            idx = np.linspace(0, len(traj) - 1, max_trajectory).astype(int)
            traj = [traj[i] for i in idx]
        return {
            "config": self.config.to_dict(),
            "best_product": self.best_product,
            "best_body": body_to_dict(self.best_body),
            "floor": self.config.floor,
            "floor_margin": self.best_product - self.config.floor,
            "min_evaluated": self.min_evaluated,
            "trajectory": [[int(i), float(v)] for i, v in traj],
            "restarts": self.restart_summaries,
        }


def _state_rng(config: SearchConfig, restart: int) -> np.random.Generator:
    child = np.random.SeedSequence(config.seed).spawn(config.restarts)[restart]
    return np.random.Generator(np.random.PCG64(child))


def _random_points(body_class: str, param: int, rng: np.random.Generator):
    if body_class == "polygon":
        r = np.sqrt(rng.random(param))
        phi = 2.0 * math.pi * rng.random(param)
        return np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1)
    return rng.uniform(-1.0, 1.0, size=(param, 3))


def _build(body_class: str, points: np.ndarray) -> Polytope:
    if body_class == "polygon":
        return convex_hull(points, 2)
    return symmetrize_orbit(points)


def random_body(body_class: str, param: int, seed: int) -> Polytope:
    """A random body of the class: polygon = hull of `param` points uniform
    in the unit disk; tetra = orbit hull of `param` uniform generators in
    [-1, 1]^3.  Redraws until full-dimensional."""
    rng = np.random.Generator(np.random.PCG64(seed))
    while True:
        try:
            return _build(body_class, _random_points(body_class, param, rng))
        except DegenerateInput:
            continue


def _run_restart(config: SearchConfig, restart: int) -> dict:
    rng = _state_rng(config, restart)
    dim = 2 if config.body_class == "polygon" else 3
    while True:
        points = _random_points(config.body_class, config.class_param, rng)
        try:
            body = _build(config.body_class, points)
            current = volume_product(body)
            break
        except (DegenerateInput, GeometryError):
            continue
    best_points = points.copy()
    best = current
    min_eval = current
    t0 = 0.1 * current
    step = config.initial_step
    streak = 0
    accepts = 0
    traj = []
    for it in range(config.max_iters):
        temp = t0 * config.cooling ** (it // _TEMP_PERIOD)
        idx = int(rng.integers(len(points)))
        delta = step * rng.normal(size=points.shape[1])
        cand_points = points.copy()
        cand_points[idx] += delta
        try:
            cand_body = _build(config.body_class, cand_points)
            cand = volume_product(cand_body)
        except (DegenerateInput, GeometryError):
            traj.append((it, best))
            continue  # invalid proposal: not a Metropolis rejection
        min_eval = min(min_eval, cand)
        diff = cand - current
        if diff <= 0.0 or rng.random() < math.exp(-diff / max(temp, 1e-300)):
            # renormalize to unit volume to stop coordinate drift
            scale = cand_body.volume ** (-1.0 / dim)
            points = cand_points * scale
            current = cand
            accepts += 1
            streak = 0
            if cand < best:
                best = cand
                best_points = points.copy()
        else:
            streak += 1
            if streak % _STREAK_LIMIT == 0:
                step = max(step * config.cooling, 1e-4 * config.initial_step)
        traj.append((it, best))
    return {
        "restart": restart,
        "best": best,
        "best_points": best_points,
        "accepts": accepts,
        "final_step": step,
        "trajectory": traj,
        "min_evaluated": min_eval,
    }


def minimize_volume_product(config: SearchConfig, threads: int = 1) -> SearchReport:
    """Simulated-annealing minimization of the volume product.

    Restarts are independent substreams merged in index order, so the
    report is identical for any thread count.
    """
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(_run_restart, [config] * config.restarts, range(config.restarts))
            )
    else:
        results = [_run_restart(config, r) for r in range(config.restarts)]

    best = math.inf
    best_points = None
    trajectory = []
    git = 0
    summaries = []
    min_eval = math.inf
    for res in results:
        for _, b in res["trajectory"]:
            best_here = min(best, b)
            trajectory.append((git, best_here))
            git += 1
        if res["best"] < best:
            best = res["best"]
            best_points = res["best_points"]
        min_eval = min(min_eval, res["min_evaluated"])
        summaries.append(
            {
                "restart": res["restart"],
                "best": res["best"],
                "accepts": res["accepts"],
                "final_step": res["final_step"],
            }
        )
    body = _build(config.body_class, best_points)
    return SearchReport(
        config=config,
        best_body=body,
        best_product=volume_product(body),
        trajectory=trajectory,
        restart_summaries=summaries,
        min_evaluated=min_eval,
    )


def santalo_point(K: Polytope, max_evals: int = 10_000):
    """Santalo point of K: the interior z minimizing |K||(K - z)deg|.

    The polar volume is a smooth convex function of z, so cyclic coordinate
    descent with golden-section line searches converges; returns
    (z, p_value).  Raises NoConvergence past max_evals evaluations.
    """
    evals = 0

    def f(z) -> float:
        nonlocal evals
        evals += 1
        if evals > max_evals:
            raise NoConvergence("santalo_point exceeded its evaluation budget")
        return polar(translate(K, -z)).volume

    z = K.vertices.mean(axis=0)
    fz = f(z)
    gold = (math.sqrt(5.0) - 1.0) / 2.0
    for _ in range(80):
        moved = 0.0
        for i in range(K.dim):
            e = np.zeros(K.dim)
            e[i] = 1.0
            shifted = translate(K, -z)
            hi = 0.999999 / gauge(shifted, e)
            lo = -0.999999 / gauge(shifted, -e)
            a, bnd = lo, hi
            c = bnd - gold * (bnd - a)
            d = a + gold * (bnd - a)
            fc = f(z + c * e)
            fd = f(z + d * e)
            while bnd - a > 1e-11 * K.scale:
                if fc < fd:
                    bnd, d, fd = d, c, fc
                    c = bnd - gold * (bnd - a)
                    fc = f(z + c * e)
                else:
                    a, c, fc = c, d, fd
                    d = a + gold * (bnd - a)
                    fd = f(z + d * e)
            t = 0.5 * (a + bnd)
            ft = f(z + t * e)
            if ft < fz:
                fz = ft
                z = z + t * e
                moved = max(moved, abs(t))
        if moved <= 1e-10 * K.scale:
            break
    return z, K.volume * fz
