"""Rational maps of small degree on the Riemann sphere.

Coefficient lists are stored in ascending powers.  Evaluation is chart
correct (poles map to infinity, the value at infinity is computed in the
w = 1/z chart).  The polynomial root finder is companion-matrix eigenvalues
followed by a fixed number of Newton polish steps; it supports batches so
the escape-time kernel can solve one cubic per grid point per step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidRationalMap, RootFindingFailure
from .sphere import (INFINITY, MobiusMap, OrientedDisc, Region, SpherePoint,
                     as_point, disc_contains, is_infinity, sph_dist)

_LEAD_TOL = 1e-14      # relative threshold for a vanishing leading coefficient
_RESULTANT_TOL = 1e-10
_CLUSTER_TOL = 1e-7    # root clustering radius for multiplicity detection
_POLISH_STEPS = 3


# ---------------------------------------------------------------------------
# polynomial helpers (ascending coefficients)
# ---------------------------------------------------------------------------

def _trim(c: np.ndarray, rel: float = _LEAD_TOL) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    nz = np.nonzero(np.abs(c) > rel * scale)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1].copy()


def polyval(c: np.ndarray, z):
    """Horner evaluation; z may be a scalar or ndarray."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, complex(c[-1]), dtype=complex)
    for k in range(len(c) - 2, -1, -1):
        out = out * z + c[k]
    return out


def polyder(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if len(c) <= 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, len(c), dtype=float)


def polymul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def polysub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a - b for ascending coefficient arrays (right-padded)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=complex)
    out[: len(a)] += a
    out[: len(b)] -= b
    return out


def _sylvester_resultant(p: np.ndarray, q: np.ndarray) -> complex:
    p, q = _trim(p), _trim(q)
    m, n = len(p) - 1, len(q) - 1
    if m == 0 or n == 0:
        return complex(1.0)
    # normalize each polynomial so the test threshold is scale-free
    p = p / np.max(np.abs(p))
    q = q / np.max(np.abs(q))
    size = m + n
    s = np.zeros((size, size), dtype=complex)
    for i in range(n):
        s[i, i : i + m + 1] = p[::-1]
    for i in range(m):
        s[n + i, i : i + n + 1] = q[::-1]
    return complex(np.linalg.det(s))


def _deflate(c: np.ndarray, root: complex) -> np.ndarray:
    """Synthetic division of c (ascending) by (z - root)."""
    rev = np.asarray(c, dtype=complex)[::-1]
    out = np.empty(len(rev) - 1, dtype=complex)
    acc = rev[0]
    for k in range(len(rev) - 1):
        out[k] = acc
        acc = acc * root + rev[k + 1]
    return out[::-1]


# ---------------------------------------------------------------------------
# root finding: batched companion eigenvalues + Newton polish
# ---------------------------------------------------------------------------

def _newton_polish(coeffs: np.ndarray, roots: np.ndarray, steps: int = _POLISH_STEPS):
    """Polish finite roots in place.  coeffs: (N, k+1) rows, roots: (N, k)."""
    dcoeffs = coeffs[:, 1:] * np.arange(1, coeffs.shape[1], dtype=float)
    finite = np.isfinite(roots)
    for _ in range(steps):
        pv = np.zeros_like(roots)
        dv = np.zeros_like(roots)
        x = np.where(finite, roots, 0.0)
        pv[...] = coeffs[:, -1][:, None]
        for k in range(coeffs.shape[1] - 2, -1, -1):
            pv = pv * x + coeffs[:, k][:, None]
        dv[...] = dcoeffs[:, -1][:, None]
        for k in range(dcoeffs.shape[1] - 2, -1, -1):
            dv = dv * x + dcoeffs[:, k][:, None]
        ok = finite & (np.abs(dv) > 0)
        step = np.where(ok, pv / np.where(ok, dv, 1.0), 0.0)
        roots = np.where(ok, roots - step, roots)
    return roots


def roots_batch(coeffs: np.ndarray) -> np.ndarray:
    """All roots of each row of `coeffs` (ascending, shape (N, d+1)).

    Returns an (N, d) complex array.  When the effective degree of a row drops
    below d (vanishing leading coefficients, relative threshold 1e-13), the
    missing roots are reported at infinity and returned as inf entries.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n, w = coeffs.shape
    d = w - 1
    out = np.full((n, d), complex(np.inf, 0.0), dtype=complex)
    if d == 0:
        return out
    scale = np.max(np.abs(coeffs), axis=1)
    bad = ~(scale > 0)
    eff = np.zeros(n, dtype=int)
    thresh = 1e-13 * np.where(scale > 0, scale, 1.0)
    for k in range(w):
        eff = np.where(np.abs(coeffs[:, k]) > thresh, k, eff)
    eff[bad] = 0
    for k in range(1, d + 1):
        rows = np.nonzero(eff == k)[0]
        if rows.size == 0:
            continue
        c = coeffs[rows, : k + 1]
        if k == 1:
            out[rows, 0] = -c[:, 0] / c[:, 1]
            continue
        monic = c / c[:, -1][:, None]
        comp = np.zeros((rows.size, k, k), dtype=complex)
        comp[:, :, -1] = -monic[:, :-1]
        idx = np.arange(k - 1)
        comp[:, idx + 1, idx] = 1.0
        ev = np.linalg.eigvals(comp)
        ev = _newton_polish(c, ev)
        out[rows, :k] = ev
    return out


def poly_roots(c: Sequence[complex]) -> np.ndarray:
    """Finite roots of a single polynomial, polished; raises on bad residuals."""
    c = _trim(np.asarray(c, dtype=complex))
    if len(c) == 1:
        return np.zeros(0, dtype=complex)
    roots = roots_batch(c[None, :])[0][: len(c) - 1]
    res = np.abs(polyval(c, roots))
    scale = np.max(np.abs(c)) * np.maximum(1.0, np.abs(roots)) ** (len(c) - 1)
    if np.any(res > 1e-10 * scale):
        raise RootFindingFailure("root residual above 1e-10 after polish")
    return roots


def _cluster_roots(roots: np.ndarray, tol: float = _CLUSTER_TOL):
    """Group roots within tol; returns list of (representative, multiplicity)."""
    remaining = list(roots)
    clusters = []
    while remaining:
        r = remaining.pop(0)
        group = [r]
        rest = []
        for s in remaining:
            if abs(s - r) <= tol:
                group.append(s)
            else:
                rest.append(s)
        remaining = rest
        clusters.append((sum(group) / len(group), len(group)))
    return clusters


# ---------------------------------------------------------------------------
# rational maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalMap:
    """p(z)/q(z) with ascending coefficient arrays and no common roots."""

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        p = _trim(np.asarray(self.num, dtype=complex))
        q = _trim(np.asarray(self.den, dtype=complex))
        if np.all(q == 0):
            raise InvalidRationalMap("zero denominator")
        if np.all(p == 0) and len(p) == 1:
            # constant zero map is allowed (e.g. derivative of a constant)
            pass
        res = _sylvester_resultant(p, q)
        if len(p) > 1 and len(q) > 1 and abs(res) <= _RESULTANT_TOL:
            raise InvalidRationalMap(
                f"numerator and denominator share a root (|resultant| = {abs(res):.2e})")
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "num", p)
        object.__setattr__(self, "den", q)

    @property
    def degree(self) -> int:
        return max(len(self.num), len(self.den)) - 1

    def padded(self):
        """(p, q) zero-padded to common length degree+1."""
        d = self.degree
        p = np.zeros(d + 1, dtype=complex)
        q = np.zeros(d + 1, dtype=complex)
        p[: len(self.num)] = self.num
        q[: len(self.den)] = self.den
        return p, q

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return self.eval_array(z)
        return self.eval_point(z)

    def eval_point(self, z: SpherePoint) -> SpherePoint:
        z = as_point(z)
        if is_infinity(z):
            p, q = self.padded()
            a, b = p[-1], q[-1]
            if b == 0:
                return INFINITY
            return a / b
        z = complex(z)
        if abs(z) > 1.0:
            # evaluate in the 1/z chart for stability at large |z|
            p, q = self.padded()
            w = 1.0 / z
            nv = complex(polyval(p[::-1], w))
            dv = complex(polyval(q[::-1], w))
        else:
            nv = complex(polyval(self.num, z))
            dv = complex(polyval(self.den, z))
        if dv == 0:
            return INFINITY
        return nv / dv

    def eval_array(self, z: np.ndarray) -> np.ndarray:
        """Vectorized chart-correct evaluation; inf entries denote infinity."""
        z = np.asarray(z, dtype=complex)
        p, q = self.padded()
        out = np.empty(z.shape, dtype=complex)
        big = ~np.isfinite(z) | (np.abs(z) > 1.0)
        small = ~big
        if np.any(small):
            zs = z[small]
            nv = polyval(self.num, zs)
            dv = polyval(self.den, zs)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = nv / dv
            val = np.where(dv == 0, complex(np.inf, 0.0), val)
            out[small] = val
        if np.any(big):
            zb = z[big]
            with np.errstate(divide="ignore", invalid="ignore"):
                w = np.where(np.isfinite(zb), 1.0 / np.where(zb == 0, 1.0, zb), 0.0)
            nv = polyval(p[::-1], w)
            dv = polyval(q[::-1], w)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = nv / dv
            val = np.where(dv == 0, complex(np.inf, 0.0), val)
            out[big] = val
        return out

    def derivative(self) -> "RationalMap":
        """Quotient rule on coefficient lists, cancelling any common roots that
        multiple poles would otherwise introduce."""
        p, q = self.num, self.den
        if len(p) == 1 and len(q) == 1:
            return RationalMap(np.zeros(1), np.ones(1))
        wnum = _trim(polysub(polymul(polyder(p), q), polymul(p, polyder(q))))
        wden = _trim(polymul(q, q))
        if len(wnum) > 1 and len(wden) > 1:
            for r, mult in _cluster_roots(poly_roots(q)):
                scale = np.max(np.abs(wnum)) * max(1.0, abs(r)) ** (len(wnum) - 1)
                while mult > 1 and abs(complex(polyval(wnum, r))) < 1e-9 * scale:
                    wnum = _trim(_deflate(wnum, r))
                    wden = _trim(_deflate(wden, r))
                    mult -= 1
        return RationalMap(wnum, wden)

    def compose_mobius(self, m: MobiusMap) -> "RationalMap":
        """The rational map z -> f(m(z)), expanded exactly in coefficients."""
        d = self.degree
        p, q = self.padded()
        az_b = np.array([m.b, m.a], dtype=complex)
        cz_d = np.array([m.d, m.c], dtype=complex)
        # powers of (az+b) and (cz+d) up to d
        pow_ab = [np.ones(1, dtype=complex)]
        pow_cd = [np.ones(1, dtype=complex)]
        for _ in range(d):
            pow_ab.append(polymul(pow_ab[-1], az_b))
            pow_cd.append(polymul(pow_cd[-1], cz_d))
        num = np.zeros(d + 1, dtype=complex)
        den = np.zeros(d + 1, dtype=complex)
        for k in range(d + 1):
            term = polymul(pow_ab[k], pow_cd[d - k])
            num[: len(term)] += p[k] * term
            den[: len(term)] += q[k] * term
        return RationalMap(num, den)


def derivative(f: RationalMap) -> RationalMap:
    return f.derivative()


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalSet:
    """Sphere points where the local degree exceeds 1, with local degrees."""

    points: tuple  # of (SpherePoint, local_degree)

    def sphere_points(self):
        return [p for p, _ in self.points]

    def total_weight(self) -> int:
        return sum(deg - 1 for _, deg in self.points)


def wronskian(f: RationalMap) -> np.ndarray:
    """p'q - pq', the polynomial whose roots are the finite critical points."""
    return _trim(polysub(polymul(polyder(f.num), f.den),
                         polymul(f.num, polyder(f.den))))


def critical_points(f: RationalMap) -> CriticalSet:
    """All critical points of f with local degrees; infinity is analyzed via
    the degree deficit of the Wronskian (degree <= 4 supported)."""
    d = f.degree
    if d > 4:
        raise InvalidRationalMap("critical_points supports degree <= 4")
    if d == 0:
        return CriticalSet(points=())
    w = wronskian(f)
    pts = []
    if len(w) > 1:
        for r, mult in _cluster_roots(poly_roots(w)):
            pts.append((complex(r), mult + 1))
    m_inf = (2 * d - 2) - (len(w) - 1)
    if m_inf > 0:
        pts.append((INFINITY, m_inf + 1))
    cs = CriticalSet(points=tuple(pts))
    if cs.total_weight() != 2 * d - 2:
        raise RootFindingFailure("critical point count does not match 2d-2")
    return cs


# ---------------------------------------------------------------------------
# fibers
# ---------------------------------------------------------------------------

def fiber_coeffs(f: RationalMap, w) -> np.ndarray:
    """Ascending coefficients of p(z) - w q(z); q alone when w is infinite."""
    p, q = f.padded()
    if is_infinity(as_point(w)):
        return q.copy()
    return p - complex(w) * q


def solve_fiber(f: RationalMap, w: SpherePoint):
    """All d solutions of f(z) = w, with multiplicity; solutions at infinity
    appear as INFINITY entries.  Residuals are verified in the spherical
    metric (< 1e-9)."""
    w = as_point(w)
    d = f.degree
    c = _trim(fiber_coeffs(f, w))
    finite = poly_roots(c) if len(c) > 1 else np.zeros(0, dtype=complex)
    sols = [complex(r) for r in finite]
    sols += [INFINITY] * (d - len(sols))
    for z in sols:
        if sph_dist(f.eval_point(z), w) > 1e-9:
            raise RootFindingFailure(
                f"fiber residual {sph_dist(f.eval_point(z), w):.2e} above 1e-9")
    return sols


# ---------------------------------------------------------------------------
# sampled univalence certificate
# ---------------------------------------------------------------------------

class Univalence(Enum):
    UNIVALENT = "univalent"
    NOT_UNIVALENT = "not_univalent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class UnivalenceResult:
    verdict: Univalence
    witness: Optional[tuple] = None  # pair of domain points with near-equal images
    detail: str = ""


def _interior_samples(disc: OrientedDisc, n: int) -> np.ndarray:
    # sunflower layout, strictly inside the circle
    k = np.arange(n, dtype=float)
    rad = disc.radius * 0.92 * np.sqrt((k + 0.5) / n)
    ang = 2.0 * math.pi * k * 0.6180339887498949
    return disc.center + rad * np.exp(1j * ang)


def _segments_cross(w: np.ndarray) -> bool:
    """Any proper crossing between non-adjacent segments of the closed
    polyline w[0] w[1] ... w[n-1] w[0]."""
    n = len(w)
    a = w
    b = np.roll(w, -1)
    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))  # first and last segments are adjacent
    i, j = i[keep], j[keep]

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    p1, p2 = a[i], b[i]
    q1, q2 = a[j], b[j]
    d1 = cross(q2 - q1, p1 - q1)
    d2 = cross(q2 - q1, p2 - q1)
    d3 = cross(p2 - p1, q1 - p1)
    d4 = cross(p2 - p1, q2 - p1)
    return bool(np.any((d1 * d2 < 0) & (d3 * d4 < 0)))


def _winding(curve: np.ndarray, z0: complex) -> float:
    v = curve - z0
    ang = np.angle(np.roll(v, -1) / v)
    return float(np.sum(ang) / (2.0 * math.pi))


def is_univalent_on_disc(f: RationalMap, disc: OrientedDisc,
                         n_boundary: int = 1024, n_interior: int = 25) -> UnivalenceResult:
    """Sampled injectivity certificate on the closed disc.

    NOT_UNIVALENT when two samples at spherical distance > 1e-6 map within
    1e-9 of each other, or some interior image has boundary winding != 1.
    UNIVALENT when the sampled boundary image is a simple closed polyline and
    every interior winding equals 1.  Anything else (including images too
    close to infinity to test) is INCONCLUSIVE.  This is evidence, not proof.
    """
    if n_boundary < 64:
        raise ValueError("n_boundary must be at least 64")
    if disc.kind != "disc" or not disc.interior_bounded:
        raise ValueError("univalence sampling requires a bounded disc")
    theta = 2.0 * math.pi * (np.arange(n_boundary) + 0.5) / n_boundary
    zb = disc.center + disc.radius * np.exp(1j * theta)
    zi = _interior_samples(disc, n_interior)
    zs = np.concatenate([zb, zi])
    ws = f.eval_array(zs)
    if not np.all(np.isfinite(ws)) or np.max(np.abs(ws)) > 1e10:
        return UnivalenceResult(Univalence.INCONCLUSIVE,
                                detail="image reaches a pole; sampling certificate unavailable")

    # near-coincidence witness over all sample pairs
    dz = np.abs(zs[None, :] - zs[:, None])
    sz = np.sqrt(1.0 + np.abs(zs) ** 2)
    sph_z = 2.0 * dz / (sz[:, None] * sz[None, :])
    dw = np.abs(ws[None, :] - ws[:, None])
    sw = np.sqrt(1.0 + np.abs(ws) ** 2)
    sph_w = 2.0 * dw / (sw[:, None] * sw[None, :])
    hit = (sph_z > 1e-6) & (sph_w < 1e-9)
    if np.any(hit):
        i, j = np.argwhere(hit)[0]
        return UnivalenceResult(Univalence.NOT_UNIVALENT,
                                witness=(complex(zs[i]), complex(zs[j])),
                                detail="two samples share an image")

    wb = ws[:n_boundary]
    wi = ws[n_boundary:]
    for k, w0 in enumerate(wi):
        wind = _winding(wb, complex(w0))
        if abs(wind - 1.0) > 0.25:
            return UnivalenceResult(Univalence.NOT_UNIVALENT,
                                    witness=(complex(zi[k]), complex(zi[k])),
                                    detail=f"interior image winding {wind:.2f} != 1")
    if _segments_cross(wb):
        return UnivalenceResult(Univalence.INCONCLUSIVE,
                                detail="boundary image polyline self-intersects at this resolution")
    return UnivalenceResult(Univalence.UNIVALENT)
