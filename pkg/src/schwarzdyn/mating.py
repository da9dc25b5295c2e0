"""Symbolic conjugacy between the boundary reduction map and angle doubling.

The reduction map on the extended real line carries a three-piece Markov
partition: piece 1 is {inf} u (-inf, -1], piece 2 is [-1, 1], piece 3 is
[1, inf).  Angle doubling on the circle carries a matching partition with
cuts at angles 0, 1/3, 2/3 (as fractions of a full turn); matching the
transition structure pins the arc of piece 1 to [2/3, 1], piece 2 to
[1/3, 2/3] and piece 3 to [0, 1/3], with the anchor correspondences
inf -> angle 0, 1 -> angle 1/3, -1 -> angle 2/3.

The conjugacy itself is computed by itinerary matching: generate the
itinerary of a point in one model, then pull the matching nested intervals
back through the inverse branches of the other model.  Ties at partition
endpoints always resolve to the lower-numbered piece, in both models.

Also here: the multiplier dictionary for the quadratic family z^2 + c and
the degree-2 Blaschke products fixing the origin, the reference models for
attracting fixed-point dynamics on the disc.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence, Tuple, Union

from .modular import rho_boundary
from .sphere import INFINITY, as_point, is_infinity

ExtendedReal = Union[float, type(INFINITY)]

# circle-side arcs by piece number: piece k covers [_ARC_LO[k], _ARC_HI[k]]
_ARC_LO = {1: 2.0 / 3.0, 2: 1.0 / 3.0, 3: 0.0}
_ARC_HI = {1: 1.0, 2: 2.0 / 3.0, 3: 1.0 / 3.0}

_ARC_MID = {1: 5.0 / 6.0, 2: 0.5, 3: 1.0 / 6.0}
_LINE_SEED = {1: -3.0, 2: 0.0, 3: 3.0}


def piece_of_real(t) -> int:
    """Markov piece of an extended real; endpoint ties go to the lower index."""
    if t is INFINITY or is_infinity(as_point(t)):
        return 1
    t = float(t)
    if t <= -1.0:
        return 1
    if t <= 1.0:
        return 2
    return 3


def piece_of_angle(theta: float) -> int:
    """Markov piece of an angle in [0, 1); ties go to the lower index."""
    theta = theta % 1.0
    if theta == 0.0:
        return 1
    if theta < 1.0 / 3.0:
        return 3
    if theta < 2.0 / 3.0:
        return 2
    return 1


def rho_itinerary(t, n: int) -> Tuple[int, ...]:
    """Pieces visited by t, rho(t), ..., rho^{n-1}(t)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for _ in range(n):
        out.append(piece_of_real(t))
        t = rho_boundary(t)
    return tuple(out)


def doubling_itinerary(theta: float, n: int) -> Tuple[int, ...]:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    theta = theta % 1.0
    for _ in range(n):
        out.append(piece_of_angle(theta))
        theta = (2.0 * theta) % 1.0
    return tuple(out)


def _angle_pullback(target: float, piece: int) -> float:
    """The inverse branch of doubling landing in the arc of `piece`."""
    cands = (target / 2.0, target / 2.0 + 0.5)
    if target == 0.0:
        cands = cands + (1.0,)  # 0 is also the arc endpoint at a full turn
    lo, hi = _ARC_LO[piece], _ARC_HI[piece]
    best, bestd = None, math.inf
    for c in cands:
        d = max(lo - c, c - hi, 0.0)
        if d < bestd:
            best, bestd = c, d
    return best % 1.0 if best != 1.0 else 0.0


def _line_pullback(target, piece: int):
    """The inverse branch of the boundary reduction map landing in `piece`."""
    if piece == 1:
        return INFINITY if target is INFINITY else float(target) - 2.0
    if piece == 3:
        return INFINITY if target is INFINITY else float(target) + 2.0
    # piece 2: the involution; target has |target| >= 1 by the Markov property
    if target is INFINITY:
        return 0.0
    return -1.0 / float(target)


def markov_E(t, depth: int = 40) -> float:
    """Circle angle of the conjugacy at an extended real t.

    Anchors are exact; elsewhere the angle is pinned by matching the depth-n
    itinerary of t through nested inverse branches of doubling, with error at
    most 2^-depth + 1e-12."""
    if depth < 8:
        raise ValueError("depth must be >= 8")
    if t is INFINITY or is_infinity(as_point(t)):
        return 0.0
    t = float(t)
    if t == 1.0:
        return 1.0 / 3.0
    if t == -1.0:
        return 2.0 / 3.0
    # walk the orbit; a float-exact hit on an anchor pins the angle exactly
    pieces = []
    cur = t
    theta = None
    for _ in range(depth):
        if cur is INFINITY:
            theta = 0.0
            break
        if cur == 1.0:
            theta = 1.0 / 3.0
            break
        if cur == -1.0:
            theta = 2.0 / 3.0
            break
        pieces.append(piece_of_real(cur))
        cur = rho_boundary(cur)
    if theta is None:
        theta = _ARC_MID[pieces[-1]]
        pieces = pieces[:-1]
    for piece in reversed(pieces):
        theta = _angle_pullback(theta, piece)
    return theta % 1.0


def markov_E_inverse(theta: float, depth: int = 40):
    """Extended real whose conjugacy angle is theta, by the mirrored
    itinerary-matching construction."""
    if depth < 8:
        raise ValueError("depth must be >= 8")
    theta = float(theta) % 1.0
    if theta == 0.0:
        return INFINITY
    if theta == 1.0 / 3.0:
        return 1.0
    if theta == 2.0 / 3.0:
        return -1.0
    pieces = []
    cur = theta
    t = None
    for _ in range(depth):
        if cur == 0.0:
            t = INFINITY
            break
        if cur == 1.0 / 3.0:
            t = 1.0
            break
        if cur == 2.0 / 3.0:
            t = -1.0
            break
        pieces.append(piece_of_angle(cur))
        cur = (2.0 * cur) % 1.0
    if t is None:
        t = _LINE_SEED[pieces[-1]]
        pieces = pieces[:-1]
    for piece in reversed(pieces):
        t = _line_pullback(t, piece)
    return t


def circle_dist(theta1: float, theta2: float) -> float:
    """Chordal distance between the circle points at the two angles."""
    return abs(cmath.exp(2j * math.pi * theta1) - cmath.exp(2j * math.pi * theta2))


def cyclic_orientation(a: float, b: float, c: float) -> int:
    """+1 when (a, b, c) occur in counterclockwise order on the circle of
    angles mod 1, -1 when clockwise, 0 when degenerate."""
    x = (b - a) % 1.0
    y = (c - a) % 1.0
    if x == 0.0 or y == 0.0 or x == y:
        return 0
    return 1 if x < y else -1


def real_line_angle(t) -> float:
    """Orientation chart for the extended real line: the angle (mod 1) of the
    Cayley image (t - i)/(t + i), with infinity at angle 0."""
    if t is INFINITY or is_infinity(as_point(t)):
        return 0.0
    t = float(t)
    w = (t - 1j) / (t + 1j)
    return (math.atan2(w.imag, w.real) / (2.0 * math.pi)) % 1.0


# ---------------------------------------------------------------------------
# quadratic multiplier dictionary and the Blaschke model
# ---------------------------------------------------------------------------

def quad_multiplier(c: complex) -> complex:
    """Multiplier of the attracting-side fixed point of z^2 + c: the root
    1 - sqrt(1 - 4c) with the principal square root, so |lambda| <= |2 - lambda|."""
    return 1.0 - cmath.sqrt(1.0 - 4.0 * complex(c))


def c_of_multiplier(lam: complex) -> complex:
    """Inverse of quad_multiplier: c = lambda/2 - lambda^2/4."""
    lam = complex(lam)
    return lam / 2.0 - lam * lam / 4.0


def blaschke_eval(lam: complex, z: complex) -> complex:
    """The degree-2 Blaschke product z (z + lam) / (1 + conj(lam) z); fixes 0
    with multiplier lam and preserves the unit circle."""
    lam = complex(lam)
    if not abs(lam) < 1.0:
        raise ValueError("the Blaschke parameter must lie in the open unit disc")
    z = complex(z)
    return z * (z + lam) / (1.0 + lam.conjugate() * z)
