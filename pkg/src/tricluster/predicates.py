"""Robust 2-D geometric predicates.

orient2d and incircle are evaluated in plain float64 first, guarded by a
static forward error bound. When the magnitude of the determinant falls
below the bound, the sign is recomputed exactly with rational arithmetic
(float64 inputs are exactly representable as Fractions), so the returned
sign is always that of the true determinant.
"""

from __future__ import annotations

from fractions import Fraction

# Machine epsilon derived constants (error bounds for the f64 filter).
_EPS = 7.105427357601002e-15  # (3 + 16 eps) * eps, eps = 2^-53
_CCW_ERR = _EPS
_ICC_ERR = (10.0 + 96.0 * 2.0**-53) * 2.0**-53


def orient2d(ax, ay, bx, by, cx, cy) -> int:
    """Sign of twice the signed area of triangle (a, b, c).

    +1 if c lies left of the directed line a->b (counter-clockwise),
    -1 if right (clockwise), 0 if exactly collinear.
    """
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright

    if detleft > 0.0:
        if detright <= 0.0:
            return 1
        detsum = detleft + detright
    elif detleft < 0.0:
        if detright >= 0.0:
            return -1
        detsum = -detleft - detright
    else:
        return _sign(-detright)

    errbound = _CCW_ERR * detsum
    if det >= errbound:
        return 1
    if det <= -errbound:
        return -1
    return _orient2d_exact(ax, ay, bx, by, cx, cy)


def _orient2d_exact(ax, ay, bx, by, cx, cy) -> int:
    fax, fay = Fraction(ax), Fraction(ay)
    fbx, fby = Fraction(bx), Fraction(by)
    fcx, fcy = Fraction(cx), Fraction(cy)
    det = (fax - fcx) * (fby - fcy) - (fay - fcy) * (fbx - fcx)
    return _sign_fraction(det)


def incircle(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    """Sign test: is d inside the circumcircle of counter-clockwise (a, b, c)?

    +1 inside, -1 outside, 0 exactly on the circle. The caller must supply
    (a, b, c) in counter-clockwise order for the sign convention to hold.
    """
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady

    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy

    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (
        alift * (bdxcdy - cdxbdy)
        + blift * (cdxady - adxcdy)
        + clift * (adxbdy - bdxady)
    )

    permanent = (
        alift * (abs(bdxcdy) + abs(cdxbdy))
        + blift * (abs(cdxady) + abs(adxcdy))
        + clift * (abs(adxbdy) + abs(bdxady))
    )
    errbound = _ICC_ERR * permanent
    if det > errbound:
        return 1
    if det < -errbound:
        return -1
    return _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    fdx, fdy = Fraction(dx), Fraction(dy)
    adx = Fraction(ax) - fdx
    ady = Fraction(ay) - fdy
    bdx = Fraction(bx) - fdx
    bdy = Fraction(by) - fdy
    cdx = Fraction(cx) - fdx
    cdy = Fraction(cy) - fdy

    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    return _sign_fraction(det)


def _sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def _sign_fraction(f: Fraction) -> int:
    n = f.numerator
    if n > 0:
        return 1
    if n < 0:
        return -1
    return 0
