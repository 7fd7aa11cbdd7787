"""Exact orientation fallback shared by both hull backends.

Doubles are dyadic rationals, so Fraction arithmetic evaluates the
orientation determinant exactly.  Only called when the floating-point
filter in the kernels cannot certify a sign, which is rare once inputs
are in general position.
"""

from fractions import Fraction


def turn_sign(ax, ay, bx, by, cx, cy) -> int:
    """Exact sign of the 2D cross product (b - a) x (c - a): +1 for a
    counterclockwise (left) turn, -1 clockwise, 0 collinear."""
    det = (Fraction(bx) - Fraction(ax)) * (Fraction(cy) - Fraction(ay)) - (
        Fraction(by) - Fraction(ay)
    ) * (Fraction(cx) - Fraction(ax))
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def above_sign(ax, ay, az, bx, by, bz, cx, cy, cz, px, py, pz) -> int:
    """Exact sign of <(b - a) x (c - a), p - a>: +1 when p lies on the
    outward-normal side of triangle (a, b, c), -1 below, 0 on the plane."""
    ux = Fraction(bx) - Fraction(ax)
    uy = Fraction(by) - Fraction(ay)
    uz = Fraction(bz) - Fraction(az)
    vx = Fraction(cx) - Fraction(ax)
    vy = Fraction(cy) - Fraction(ay)
    vz = Fraction(cz) - Fraction(az)
    wx = Fraction(px) - Fraction(ax)
    wy = Fraction(py) - Fraction(ay)
    wz = Fraction(pz) - Fraction(az)
    det = (
        (uy * vz - uz * vy) * wx
        + (uz * vx - ux * vz) * wy
        + (ux * vy - uy * vx) * wz
    )
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0
