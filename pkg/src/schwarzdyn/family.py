"""The one-parameter family f_t(z) = (z + t) / (1 + z^3/2).

f_0 is the base map whose image of the unit disc is the model quadrature
domain; for other t the disc is replaced by the circumcircle of the three
finite critical points of f_t.  The critical triple is ordered deterministically
(counterclockwise about its centroid, starting nearest the positive real
direction) so that real parameters give the ordering (real, upper, lower).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import NotInFamily
from .rational import RationalMap, critical_points
from .schwarz import SchwarzSystem, build_system
from .sphere import is_infinity


def ft_map(t) -> RationalMap:
    return RationalMap(num=[complex(t), 1.0], den=[1.0, 0.0, 0.0, 0.5])


def f0_map() -> RationalMap:
    return ft_map(0.0)


def ordered_critical_triple(f: RationalMap):
    """The three finite critical points, counterclockwise about their centroid,
    starting at the one whose direction from the centroid is closest to the
    positive real axis."""
    finite = [complex(c) for c, _ in critical_points(f).points if not is_infinity(c)]
    if len(finite) != 3:
        raise NotInFamily("expected exactly three finite critical points")
    centroid = sum(finite) / 3.0
    ang = [math.atan2((c - centroid).imag, (c - centroid).real) for c in finite]
    start = min(range(3), key=lambda k: (abs(ang[k]), -finite[k].real))
    rel = [(ang[k] - ang[start]) % (2.0 * math.pi) for k in range(3)]
    order = sorted(range(3), key=lambda k: rel[k])
    return tuple(finite[k] for k in order)


def ft_system(t, n_boundary: int = 1024, n_interior: int = 25) -> SchwarzSystem:
    """Schwarz system of f_t on the circle through its finite critical points."""
    f = ft_map(t)
    return build_system(f, ordered_critical_triple(f),
                        n_boundary=n_boundary, n_interior=n_interior)


def f0_system(n_boundary: int = 1024, n_interior: int = 25) -> SchwarzSystem:
    return ft_system(0.0, n_boundary=n_boundary, n_interior=n_interior)


def estimate_univalence_onset(t_low: float = -1.0, t_high: float = 0.0,
                              steps: int = 24, n_boundary: int = 512,
                              n_interior: int = 16) -> float:
    """Bisection estimate of the negative parameter below which the univalence
    certificate stops passing.  Informational; depends on the sampling
    resolution used."""

    def passes(t):
        try:
            ft_system(t, n_boundary=n_boundary, n_interior=n_interior)
            return True
        except NotInFamily:
            return False

    if not passes(t_high):
        return math.nan
    if passes(t_low):
        return t_low
    lo, hi = t_low, t_high
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi
