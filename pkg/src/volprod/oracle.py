"""Monte-Carlo volume oracle: an independent brute-force channel that
validates the exact geometry from membership tests alone.

RNG: numpy's PCG64 behind numpy.random.Generator, seeded directly with the
given 64-bit integer.  Samples are drawn in fixed blocks of 2**17 points;
numpy fills requested arrays sequentially from the bit stream, so the
estimate is a pure function of (member, bbox, n, seed) and does not depend
on the block size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Polytope

_BLOCK = 1 << 17


@dataclass(frozen=True)
class OracleEstimate:
    mean: float
    stderr: float
    n_samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }


def mc_volume(member, bbox, n: int, seed: int) -> OracleEstimate:
    """Hit-fraction estimate of the volume of {x : member(x)} inside bbox.

    member must be a deterministic vectorized predicate mapping (m, d)
    points to a boolean array; bbox is (lo, hi) arrays of length d.
    """
    if n < 10_000:
        raise ValueError("oracle needs at least 1e4 samples")
    lo = np.asarray(bbox[0], dtype=np.float64)
    hi = np.asarray(bbox[1], dtype=np.float64)
    dim = lo.shape[0]
    span = hi - lo
    box_vol = float(np.prod(span))
    rng = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    done = 0
    while done < n:
        m = min(_BLOCK, n - done)
        pts = lo + rng.random((m, dim)) * span
        hits += int(np.count_nonzero(member(pts)))
        done += m
    p = hits / n
    return OracleEstimate(
        mean=p * box_vol,
        stderr=float(np.sqrt(p * (1.0 - p) / n)) * box_vol,
        n_samples=n,
        seed=seed,
    )


def mc_area_2d(member, bbox, n: int, seed: int) -> OracleEstimate:
    """2D alias of mc_volume (area of a planar region)."""
    return mc_volume(member, bbox, n, seed)


def polytope_bbox(P: Polytope):
    """Axis-aligned box around P with 1e-6 relative inflation."""
    lo = P.vertices.min(axis=0)
    hi = P.vertices.max(axis=0)
    pad = 1e-6 * P.scale
    return lo - pad, hi + pad


def polytope_membership(P: Polytope):
    """Vectorized exact membership predicate of P (facet tests, no slack)."""
    n = P.gplanes[:, : P.dim]
    off = P.gplanes[:, P.dim]

    def member(pts: np.ndarray) -> np.ndarray:
        return np.all(pts @ n.T <= off, axis=1)

    return member


def mc_volume_polytope(P: Polytope, n: int, seed: int) -> OracleEstimate:
    """Monte-Carlo volume of a Polytope in its inflated bounding box."""
    return mc_volume(polytope_membership(P), polytope_bbox(P), n, seed)
