"""Geometry on the Riemann sphere.

Complex numbers extended by an explicit point at infinity, Mobius maps given
by 2x2 complex matrices, and oriented Euclidean discs (with a half-plane
variant for collinear data).  All tolerances are taken in the spherical
(chordal) metric so that infinity is handled uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import DegenerateTriple, InvalidRationalMap


class _Infinity:
    """The point at infinity.  A singleton; compares equal only to itself."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_infinity_instance, ())


INFINITY = _Infinity()


def _infinity_instance():
    return INFINITY


#: A point of the Riemann sphere: a finite complex number or INFINITY.
SpherePoint = Union[complex, _Infinity]


def is_infinity(z) -> bool:
    return z is INFINITY or (isinstance(z, complex) and not (
        math.isfinite(z.real) and math.isfinite(z.imag)))


def as_point(z) -> SpherePoint:
    """Normalize input to a SpherePoint.  Rejects NaN coordinates."""
    if z is INFINITY:
        return INFINITY
    w = complex(z)
    if math.isnan(w.real) or math.isnan(w.imag):
        raise ValueError("NaN is not a point of the sphere")
    if math.isinf(w.real) or math.isinf(w.imag):
        return INFINITY
    return w


def sph_dist(z: SpherePoint, w: SpherePoint) -> float:
    """Chordal distance 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)), with d(z, inf) = 2/sqrt(1+|z|^2)."""
    zi, wi = is_infinity(z), is_infinity(w)
    if zi and wi:
        return 0.0
    if zi:
        return 2.0 / math.sqrt(1.0 + abs(complex(w)) ** 2)
    if wi:
        return 2.0 / math.sqrt(1.0 + abs(complex(z)) ** 2)
    z, w = complex(z), complex(w)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d), with ad - bc != 0.

    Coefficients are normalized on construction so the largest magnitude
    equals 1, which makes the nondegeneracy threshold scale-free.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = complex(self.a), complex(self.b), complex(self.c), complex(self.d)
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0.0:
            raise InvalidRationalMap("zero Mobius matrix")
        a, b, c, d = a / scale, b / scale, c / scale, d / scale
        if abs(a * d - b * c) <= 1e-14:
            raise InvalidRationalMap("degenerate Mobius map (|det| <= 1e-14)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, z: SpherePoint) -> SpherePoint:
        return apply_mobius(self, z)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other: (self.compose(other))(z) == self(other(z))."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    @staticmethod
    def identity() -> "MobiusMap":
        return MobiusMap(1, 0, 0, 1)


def apply_mobius(m: MobiusMap, z: SpherePoint) -> SpherePoint:
    """Chart-correct evaluation: m(inf) = a/c (inf when c = 0), m(-d/c) = inf."""
    if is_infinity(z):
        if m.c == 0:
            return INFINITY
        return m.a / m.c
    z = complex(z)
    den = m.c * z + m.d
    if den == 0:
        return INFINITY
    return (m.a * z + m.b) / den


def _to_zero_one_inf(z1: SpherePoint, z2: SpherePoint, z3: SpherePoint) -> MobiusMap:
    # Standard map sending (z1, z2, z3) -> (0, 1, inf).
    if is_infinity(z1):
        return MobiusMap(0, z2 - z3, 1, -z3)
    if is_infinity(z2):
        return MobiusMap(1, -z1, 1, -z3)
    if is_infinity(z3):
        return MobiusMap(1, -z1, 0, z2 - z1)
    return MobiusMap(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))


def _check_distinct(points, what):
    pts = [as_point(p) for p in points]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if sph_dist(pts[i], pts[j]) < 1e-13:
                raise DegenerateTriple(f"{what} points {i} and {j} coincide")
    return pts


def mobius_from_triple(src, dst) -> MobiusMap:
    """The unique Mobius map with src[k] -> dst[k] for k = 0, 1, 2."""
    s = _check_distinct(src, "source")
    t = _check_distinct(dst, "target")
    ms = _to_zero_one_inf(*s)
    mt = _to_zero_one_inf(*t)
    return mt.inverse().compose(ms)


class Region(Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class OrientedDisc:
    """A disc of the sphere, described by its boundary circle or line.

    kind == "disc": boundary is the Euclidean circle |z - center| = radius and
    the interior is the bounded side when interior_bounded, else the
    complement side (which contains infinity).

    kind == "halfplane": boundary is the line through `point` with unit
    `normal` pointing into the interior.
    """

    kind: str
    center: complex = 0j
    radius: float = 0.0
    interior_bounded: bool = True
    point: complex = 0j
    normal: complex = 0j

    @staticmethod
    def disc(center, radius, interior_bounded=True) -> "OrientedDisc":
        if not radius > 0:
            raise DegenerateTriple("disc radius must be positive")
        return OrientedDisc("disc", center=complex(center), radius=float(radius),
                            interior_bounded=interior_bounded)

    @staticmethod
    def halfplane(point, normal) -> "OrientedDisc":
        n = complex(normal)
        if abs(n) == 0:
            raise DegenerateTriple("half-plane normal must be nonzero")
        return OrientedDisc("halfplane", point=complex(point), normal=n / abs(n))

    def complement(self) -> "OrientedDisc":
        if self.kind == "disc":
            return OrientedDisc("disc", center=self.center, radius=self.radius,
                                interior_bounded=not self.interior_bounded)
        return OrientedDisc("halfplane", point=self.point, normal=-self.normal)

    def signed_distance(self, z: complex) -> float:
        """Negative strictly inside the interior region, positive outside."""
        z = complex(z)
        if self.kind == "disc":
            s = abs(z - self.center) - self.radius
            return s if self.interior_bounded else -s
        return -((z - self.point) * self.normal.conjugate()).real


def disc_through(z1, z2, z3) -> OrientedDisc:
    """The disc whose boundary passes through z1, z2, z3, interior on the left
    of the traversal z1 -> z2 -> z3.  Collinear data (including a point at
    infinity) yields the half-plane variant."""
    p1, p2, p3 = _check_distinct((z1, z2, z3), "circle")
    infs = [is_infinity(p) for p in (p1, p2, p3)]
    if sum(infs) >= 2:
        raise DegenerateTriple("at most one point may be infinite")
    if any(infs):
        # Line through the two finite points; travel direction fixed by where
        # infinity sits in the traversal order.
        if infs[2]:
            a, u = p1, p2 - p1
        elif infs[0]:
            a, u = p2, p3 - p2
        else:
            a, u = p3, p1 - p3
        return OrientedDisc.halfplane(a, 1j * u)

    scale = max(abs(p1 - p2), abs(p2 - p3), abs(p3 - p1))
    den = (p1.conjugate() * (p2 - p3) + p2.conjugate() * (p3 - p1)
           + p3.conjugate() * (p1 - p2))
    if abs(den) <= 1e-12 * scale * scale:
        # Collinear: orientation from the cyclic order of the three points on
        # the line (seen as a circle through infinity).
        e = (p2 - p1) / abs(p2 - p1)
        s1, s2, s3 = 0.0, ((p2 - p1) * e.conjugate()).real, ((p3 - p1) * e.conjugate()).real
        positive = (s1 < s2 < s3) or (s2 < s3 < s1) or (s3 < s1 < s2)
        u = e if positive else -e
        return OrientedDisc.halfplane(p1, 1j * u)

    num = (abs(p1) ** 2 * (p2 - p3) + abs(p2) ** 2 * (p3 - p1)
           + abs(p3) ** 2 * (p1 - p2))
    center = num / den
    radius = (abs(p1 - center) + abs(p2 - center) + abs(p3 - center)) / 3.0
    return OrientedDisc.disc(center, radius, interior_bounded=den.imag > 0)


def disc_contains(d: OrientedDisc, z: SpherePoint, tol: float = 1e-12) -> Region:
    """Classify z against the interior of d, with a boundary band of width tol.

    Infinity is outside every bounded-interior disc, inside every
    complement-side disc, and on the boundary of a half-plane (the boundary
    line closes up through infinity on the sphere)."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    z = as_point(z)
    if is_infinity(z):
        if d.kind == "halfplane":
            return Region.BOUNDARY
        return Region.OUTSIDE if d.interior_bounded else Region.INSIDE
    s = d.signed_distance(z)
    if abs(s) <= tol:
        return Region.BOUNDARY
    return Region.INSIDE if s < 0 else Region.OUTSIDE
