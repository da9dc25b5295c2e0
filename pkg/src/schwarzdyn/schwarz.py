"""Schwarz functions of simply connected quadrature-domain systems.

A system is a degree-3 rational map f together with an ordered triple of its
critical points lying on a common circle ("the disc" D) on whose closure f is
injective.  The Mobius involution M fixes the first critical point and swaps
the other two, maps D onto the complementary disc D*, and the Schwarz function
is sigma = f o M o f^{-1} on f(D).  On the boundary of a real-symmetric image
domain sigma coincides with complex conjugation, which is the defining
property of a quadrature domain.

Iteration partitions the sphere: points whose orbit reaches the fundamental
tile T = sphere \\ (f(D) u {critical values}) are escaping; the rest form the
filled Julia set.  Escape is recorded together with a branch address over the
alphabet {a, b, B}, chosen so that addresses mirror reduced words of the
modular-group model acting on tiles (see the `modular` module).

Everything is evaluated through one vectorized kernel: a scalar call is a
batch of size one, and the renderer classifies whole pixel rows through the
same code path, so results are identical no matter how work is chunked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (AmbiguousBranch, FixedPointNotFound, NotInFamily,
                     OutsideDomain)
from .rational import (RationalMap, Univalence, UnivalenceResult,
                       critical_points, is_univalent_on_disc, roots_batch,
                       solve_fiber)
from .sphere import (INFINITY, MobiusMap, OrientedDisc, Region, SpherePoint,
                     apply_mobius, as_point, disc_contains, disc_through,
                     is_infinity, mobius_from_triple, sph_dist)

# numerical policy
_BAND = 1e-9          # closure band for membership in f(D) via fiber points
_AMB_NEAR = 1e-7      # two candidate branches this close to the circle: refuse
_FP_NEAR = 1e-8       # orbit enters this neighborhood of an attracting fixed point
_NEWTON_TOL = 1e-13
_NEWTON_MAX = 50

_INF_C = complex(np.inf, 0.0)

# orbit status codes used by the kernel
_ST_ACTIVE = 0
_ST_ESCAPING = 1
_ST_CONVERGED = 2
_ST_BOUNDED = 3
_ST_AMBIGUOUS = 4
_ST_NONFINITE = 5

# branch letters
_CODE_A, _CODE_B, _CODE_BINV = 1, 2, 3
_LETTER_CHARS = {_CODE_A: "a", _CODE_B: "b", _CODE_BINV: "B"}


class TileRegion(Enum):
    IN_TILE = "in_tile"
    IN_DOMAIN = "in_domain"
    ON_BOUNDARY = "on_boundary"


class OrbitFate(Enum):
    ESCAPING = "escaping"
    NON_ESCAPING = "non_escaping"
    UNDETERMINED = "undetermined"


class NonEscapeWitness(Enum):
    CONVERGED_TO_FIXED_POINT = "converged_to_fixed_point"
    BOUNDED_FOR_MAX_ITER = "bounded_for_max_iter"


class ConnVerdict(Enum):
    CONNECTED = "connected"
    DISCONNECTED = "disconnected"
    UNDETERMINED = "undetermined"


class FixedPointClass(Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    INDIFFERENT = "indifferent"
    REPELLING = "repelling"


@dataclass(frozen=True)
class EscapeResult:
    fate: OrbitFate
    depth: Optional[int] = None         # least n with sigma^n(z) in the tile
    address: Optional[str] = None       # one letter per step, length == depth
    witness: Optional[NonEscapeWitness] = None
    reason: Optional[str] = None

    @property
    def escaping(self) -> bool:
        return self.fate is OrbitFate.ESCAPING


@dataclass(frozen=True)
class ConnectednessResult:
    verdict: ConnVerdict
    depth: Optional[int] = None


@dataclass(frozen=True)
class FixedPointReport:
    location: complex
    multiplier: complex
    classification: FixedPointClass


def classify_multiplier(multiplier: complex) -> FixedPointClass:
    m = abs(multiplier)
    if m < 1e-8:
        return FixedPointClass.SUPERATTRACTING
    if abs(m - 1.0) <= 1e-8:
        return FixedPointClass.INDIFFERENT
    return FixedPointClass.ATTRACTING if m < 1.0 else FixedPointClass.REPELLING


@dataclass(frozen=True)
class FundamentalTile:
    """Membership view of T = sphere \\ (f(D) u {critical values})."""

    system: "SchwarzSystem"
    boundary_samples: np.ndarray

    def contains(self, z: SpherePoint) -> TileRegion:
        return self.system.tile_class(z)


def _to_c(z: SpherePoint) -> complex:
    z = as_point(z)
    return _INF_C if is_infinity(z) else complex(z)


def _from_c(c: complex) -> SpherePoint:
    return INFINITY if not (math.isfinite(c.real) and math.isfinite(c.imag)) else complex(c)


def _mobius_batch(m: MobiusMap, z: np.ndarray) -> np.ndarray:
    fin = np.isfinite(z)
    zf = np.where(fin, z, 0.0)
    num = m.a * zf + m.b
    den = m.c * zf + m.d
    with np.errstate(divide="ignore", invalid="ignore"):
        val = num / den
    val = np.where(den == 0, _INF_C, val)
    at_inf = (m.a / m.c) if m.c != 0 else _INF_C
    return np.where(fin, val, at_inf)


def _rational_eval_batch(p_pad: np.ndarray, q_pad: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Chart-correct f(z) on an array; infinities in, infinities out."""
    out = np.empty(z.shape, dtype=complex)
    fin = np.isfinite(z)
    big = ~fin | (np.abs(np.where(fin, z, 0.0)) > 1.0)
    small = ~big
    if np.any(small):
        zs = z[small]
        nv = np.full(zs.shape, p_pad[-1], dtype=complex)
        dv = np.full(zs.shape, q_pad[-1], dtype=complex)
        for k in range(len(p_pad) - 2, -1, -1):
            nv = nv * zs + p_pad[k]
            dv = dv * zs + q_pad[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            val = nv / dv
        out[small] = np.where(dv == 0, _INF_C, val)
    if np.any(big):
        zb = z[big]
        finb = np.isfinite(zb)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(finb, 1.0 / np.where(finb, zb, 1.0), 0.0)
        nv = np.full(w.shape, p_pad[0], dtype=complex)
        dv = np.full(w.shape, q_pad[0], dtype=complex)
        for k in range(1, len(p_pad)):
            nv = nv * w + p_pad[k]
            dv = dv * w + q_pad[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            val = nv / dv
        out[big] = np.where(dv == 0, _INF_C, val)
    return out


class SchwarzSystem:
    """A validated system; construct with build_system().

    Immutable after construction.  All evaluation methods are pure and safe
    to call concurrently; the lazily computed fixed point is idempotent.
    """

    def __init__(self, f: RationalMap, triple, cf, disc: OrientedDisc,
                 mobius: MobiusMap, sigma_map: RationalMap, sigma_crit,
                 real_symmetric: bool, univalence: UnivalenceResult,
                 boundary_samples: np.ndarray):
        self.f = f
        self.triple = tuple(triple)
        self.cf = cf
        self.disc = disc
        self.mobius = mobius
        self.sigma_map = sigma_map          # f o M, expanded as a rational map
        self.sigma_crit = sigma_crit        # f(M(cf)), the critical point of sigma
        self.real_symmetric = real_symmetric
        self.univalence = univalence
        self.boundary_samples = boundary_samples
        self.tile = FundamentalTile(self, boundary_samples)

        self.center = disc.center
        self.radius = disc.radius
        self._p, self._q = f.padded()
        self._gp, self._gq = sigma_map.padded()
        self._fprime = f.derivative()
        self._gprime = sigma_map.derivative()
        self.critical_values = tuple(f.eval_point(c) for c in self.triple)

        # branch sectors: cut the eta-plane at the critical directions seen
        # from the disc center; the sector from c1 to c2 carries letter B,
        # c2 to c3 letter a, c3 to c1 letter b (counterclockwise).  This makes
        # escape addresses match reduced words of the group-tile model.
        angles = np.array([math.atan2((c - self.center).imag, (c - self.center).real)
                           % (2 * math.pi) for c in self.triple])
        codes = np.array([_CODE_BINV, _CODE_A, _CODE_B], dtype=np.uint8)
        order = np.argsort(angles)
        self._sector_starts = angles[order]
        self._sector_codes = codes[order]
        self._fp_cache = {}

    # -- low-level batched pieces -------------------------------------------

    def _fiber_batch(self, z: np.ndarray) -> np.ndarray:
        fin = np.isfinite(z)
        zs = np.where(fin, z, 0.0)
        coeffs = self._p[None, :] - zs[:, None] * self._q[None, :]
        if not np.all(fin):
            coeffs[~fin] = self._q
        return roots_batch(coeffs)

    def _signed(self, fiber: np.ndarray) -> np.ndarray:
        return np.abs(fiber - self.center) - self.radius

    def _tile_codes(self, smin: np.ndarray) -> np.ndarray:
        """0 = in domain, 1 = on boundary band, 2 = in tile."""
        out = np.full(smin.shape, 2, dtype=np.uint8)
        out[smin <= _BAND] = 1
        out[smin < -_BAND] = 0
        return out

    def _select(self, fiber: np.ndarray, sd: np.ndarray):
        rows = np.arange(fiber.shape[0])
        jmin = np.argmin(sd, axis=1)
        zeta = fiber[rows, jmin]
        near_in = (sd <= _BAND) & (np.abs(sd) <= _AMB_NEAR)
        ambiguous = near_in.sum(axis=1) >= 2
        return zeta, ambiguous

    def _letters(self, eta: np.ndarray) -> np.ndarray:
        fin = np.isfinite(eta)
        rel = np.where(fin, eta, 1.0) - self.center
        phi = np.mod(np.angle(rel), 2 * math.pi)
        idx = np.searchsorted(self._sector_starts, phi, side="right") - 1
        idx = np.where(idx < 0, len(self._sector_starts) - 1, idx)
        codes = self._sector_codes[idx]
        # eta at infinity is the collision point of the two sheets over the
        # branch point; label it 'a' by convention
        return np.where(fin, codes, np.uint8(_CODE_A)).astype(np.uint8)

    # -- membership ----------------------------------------------------------

    def tile_class_batch(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        fiber = self._fiber_batch(z.ravel())
        smin = self._signed(fiber).min(axis=1)
        return self._tile_codes(smin).reshape(z.shape)

    def tile_class(self, z: SpherePoint) -> TileRegion:
        code = int(self.tile_class_batch(np.array([_to_c(z)]))[0])
        return (TileRegion.IN_DOMAIN, TileRegion.ON_BOUNDARY, TileRegion.IN_TILE)[code]

    # -- evaluation ----------------------------------------------------------

    def _zeta_batch(self, z: np.ndarray):
        """Fiber point in the closed disc for each entry, with status.

        status: 0 ok, 1 outside the closure band, 2 ambiguous branch."""
        fiber = self._fiber_batch(z)
        sd = self._signed(fiber)
        zeta, ambiguous = self._select(fiber, sd)
        smin = sd.min(axis=1)
        status = np.zeros(z.shape, dtype=np.uint8)
        status[smin > _BAND] = 1
        status[ambiguous] = 2
        return zeta, status

    def sigma_many(self, z: np.ndarray) -> np.ndarray:
        """Vectorized Schwarz-function evaluation on points of f(D) (closure
        band 1e-9).  Raises on the first entry outside the domain or with an
        ambiguous branch."""
        z = np.asarray(z, dtype=complex)
        zeta, status = self._zeta_batch(z.ravel())
        if np.any(status == 1):
            k = int(np.nonzero(status == 1)[0][0])
            raise OutsideDomain(f"point {z.ravel()[k]} is not in the image domain")
        if np.any(status == 2):
            k = int(np.nonzero(status == 2)[0][0])
            raise AmbiguousBranch(
                f"point {z.ravel()[k]} is too close to a critical value to pick a branch")
        return _rational_eval_batch(self._gp, self._gq, zeta).reshape(z.shape)

    def sigma(self, z: SpherePoint) -> SpherePoint:
        return _from_c(complex(self.sigma_many(np.array([_to_c(z)]))[0]))

    def sigma_derivative(self, z: SpherePoint) -> complex:
        """d sigma / dz, via (f o M)'(zeta) / f'(zeta) at the disc-side fiber
        point; zero at the critical point of sigma."""
        zeta, status = self._zeta_batch(np.array([_to_c(z)]))
        if status[0] == 1:
            raise OutsideDomain(f"point {z} is not in the image domain")
        if status[0] == 2:
            raise AmbiguousBranch(f"point {z} is too close to a critical value")
        zv = complex(zeta[0])
        gp = self._gprime.eval_point(zv)
        if gp == 0:
            return 0.0
        fp = self._fprime.eval_point(zv)
        if is_infinity(gp) or is_infinity(fp) or fp == 0:
            raise OutsideDomain("derivative undefined here (critical value of f)")
        return complex(gp) / complex(fp)

    # -- orbit classification -------------------------------------------------

    def classify_batch(self, z0: np.ndarray, max_iter: int,
                       record_letters: bool = False):
        """Classify every entry of z0 (complex array; non-finite = infinity).

        Returns (status, depth, letters): status uses the module codes
        (escaping / converged / bounded / ambiguous / nonfinite), depth is the
        escape depth where applicable, letters is an (n, max_iter) uint8 array
        of branch codes when record_letters is set, else None.
        """
        if max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        flat = np.asarray(z0, dtype=complex).ravel()
        n = flat.size
        status = np.full(n, _ST_ACTIVE, dtype=np.uint8)
        depth = np.zeros(n, dtype=np.int32)
        letters = np.zeros((n, max_iter), dtype=np.uint8) if record_letters else None

        isnan = np.isnan(flat.real) | np.isnan(flat.imag)
        status[isnan] = _ST_NONFINITE

        idx = np.nonzero(status == _ST_ACTIVE)[0]
        fiber = self._fiber_batch(flat[idx])
        sd = self._signed(fiber)
        esc = sd.min(axis=1) > -_BAND
        status[idx[esc]] = _ST_ESCAPING
        depth[idx[esc]] = 0
        keep = ~esc
        idx, fiber, sd = idx[keep], fiber[keep], sd[keep]

        fp = self._fixed_point_location()

        for k in range(1, max_iter + 1):
            if idx.size == 0:
                break
            zeta, ambiguous = self._select(fiber, sd)
            status[idx[ambiguous]] = _ST_AMBIGUOUS
            good = ~ambiguous
            idx, zeta = idx[good], zeta[good]
            if idx.size == 0:
                break
            if record_letters:
                eta = _mobius_batch(self.mobius, zeta)
                letters[idx, k - 1] = self._letters(eta)
            znext = _rational_eval_batch(self._gp, self._gq, zeta)
            bad = np.isnan(znext.real) & np.isnan(znext.imag)
            status[idx[bad]] = _ST_NONFINITE
            ok = ~bad
            idx, znext = idx[ok], znext[ok]
            if idx.size == 0:
                break
            fiber = self._fiber_batch(znext)
            sd = self._signed(fiber)
            esc = sd.min(axis=1) > -_BAND
            status[idx[esc]] = _ST_ESCAPING
            depth[idx[esc]] = k
            live = ~esc
            if fp is not None:
                conv = live & (np.abs(znext - fp) < _FP_NEAR)
                status[idx[conv]] = _ST_CONVERGED
                live &= ~conv
            idx, fiber, sd = idx[live], fiber[live], sd[live]

        status[idx] = _ST_BOUNDED
        shape = np.asarray(z0).shape
        return status.reshape(shape), depth.reshape(shape), letters

    def classify(self, z: SpherePoint, max_iter: int = 200) -> EscapeResult:
        status, depth, letters = self.classify_batch(
            np.array([_to_c(z)]), max_iter, record_letters=True)
        st, d = int(status[0]), int(depth[0])
        if st == _ST_ESCAPING:
            addr = "".join(_LETTER_CHARS[int(c)] for c in letters[0, :d])
            return EscapeResult(OrbitFate.ESCAPING, depth=d, address=addr)
        if st == _ST_CONVERGED:
            return EscapeResult(OrbitFate.NON_ESCAPING,
                                witness=NonEscapeWitness.CONVERGED_TO_FIXED_POINT)
        if st == _ST_BOUNDED:
            return EscapeResult(OrbitFate.NON_ESCAPING,
                                witness=NonEscapeWitness.BOUNDED_FOR_MAX_ITER)
        reason = "ambiguous branch near a critical value" if st == _ST_AMBIGUOUS \
            else "orbit left the computable chart"
        return EscapeResult(OrbitFate.UNDETERMINED, reason=reason)

    # -- preimages -------------------------------------------------------------

    def preimages(self, w: SpherePoint):
        """All z in f(D) with sigma(z) = w, with multiplicity: keep the fiber
        points of w lying in the closed complementary disc and push them back
        through f o M."""
        w = as_point(w)
        etas = solve_fiber(self.f, w)
        out = []
        for eta in etas:
            if is_infinity(eta):
                sd = math.inf
            else:
                sd = abs(complex(eta) - self.center) - self.radius
            if sd >= -_BAND:
                out.append(self.sigma_map.eval_point(eta))
        return out

    # -- fixed points ------------------------------------------------------------

    def _fixed_point_location(self) -> Optional[complex]:
        rep = self.attracting_fixed_point()
        return None if rep is None else rep.location

    def attracting_fixed_point(self, seeds: int = 49) -> Optional[FixedPointReport]:
        """Newton search for an attracting fixed point of sigma from a seed
        grid inside f(D); None when no seed converges to one.  Cached."""
        if seeds < 1:
            raise ValueError("seeds must be >= 1")
        if seeds in self._fp_cache:
            return self._fp_cache[seeds]
        side = max(2, math.ceil(math.sqrt(seeds)))
        xs = self.boundary_samples.real
        ys = self.boundary_samples.imag
        gx = np.linspace(xs.min(), xs.max(), side + 2)[1:-1]
        gy = np.linspace(ys.min(), ys.max(), side + 2)[1:-1]
        zz = (gx[None, :] + 1j * gy[:, None]).ravel()
        inside = self.tile_class_batch(zz) == 0
        z = zz[inside]
        report = None
        if z.size:
            z = self._newton_fixed(z)
            report = self._accept_fixed(z)
        self._fp_cache[seeds] = report
        return report

    def _newton_fixed(self, z: np.ndarray) -> np.ndarray:
        gpp, gpq = self._gprime.padded()
        fpp, fpq = self._fprime.padded()
        alive = np.ones(z.shape, dtype=bool)
        z = z.copy()
        for _ in range(_NEWTON_MAX):
            if not np.any(alive):
                break
            za = z[alive]
            zeta, status = self._zeta_batch(za)
            ok = status == 0
            sig = np.full(za.shape, np.nan, dtype=complex)
            der = np.full(za.shape, np.nan, dtype=complex)
            if np.any(ok):
                zo = zeta[ok]
                sig[ok] = _rational_eval_batch(self._gp, self._gq, zo)
                gp = _rational_eval_batch(gpp, gpq, zo)
                fp = _rational_eval_batch(fpp, fpq, zo)
                with np.errstate(divide="ignore", invalid="ignore"):
                    der[ok] = gp / fp
            denom = der - 1.0
            with np.errstate(divide="ignore", invalid="ignore"):
                step = (sig - za) / denom
            bad = ~np.isfinite(step)
            step = np.where(bad, 0.0, step)
            z[alive] = za - step
            moved = (np.abs(step) > _NEWTON_TOL) & ~bad
            nxt = np.zeros_like(alive)
            nxt[alive] = moved
            alive = nxt
        return z

    def _accept_fixed(self, z: np.ndarray) -> Optional[FixedPointReport]:
        candidates = []
        for p in z:
            p = complex(p)
            if not (math.isfinite(p.real) and math.isfinite(p.imag)):
                continue
            try:
                sp = self.sigma(p)
            except (OutsideDomain, AmbiguousBranch):
                continue
            if sph_dist(sp, p) >= 1e-10:
                continue
            try:
                lam = self.sigma_derivative(p)
            except (OutsideDomain, AmbiguousBranch):
                continue
            if abs(lam) < 1.0:
                candidates.append((p, lam))
        if not candidates:
            return None
        # deduplicate and keep the most attracting representative
        reps = []
        for p, lam in sorted(candidates, key=lambda t: abs(t[1])):
            if all(abs(p - q) > 1e-8 for q, _ in reps):
                reps.append((p, lam))
        p, lam = reps[0]
        return FixedPointReport(location=p, multiplier=lam,
                                classification=classify_multiplier(lam))

    # -- connectedness -------------------------------------------------------------

    def connectedness(self, max_iter: int = 200) -> ConnectednessResult:
        """Orbit test on the critical point of sigma: the filled Julia set is
        connected exactly when that orbit does not escape."""
        res = self.classify(self.sigma_crit, max_iter=max_iter)
        if res.fate is OrbitFate.ESCAPING:
            return ConnectednessResult(ConnVerdict.DISCONNECTED, depth=res.depth)
        if res.fate is OrbitFate.NON_ESCAPING:
            return ConnectednessResult(ConnVerdict.CONNECTED)
        return ConnectednessResult(ConnVerdict.UNDETERMINED)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _match_critical(point, crit_list):
    best, bestd = None, math.inf
    for c in crit_list:
        d = sph_dist(point, c)
        if d < bestd:
            best, bestd = c, d
    return best, bestd


def _is_real_symmetric(f: RationalMap, triple) -> bool:
    c1, c2, c3 = triple
    if abs(complex(c1).imag) > 1e-10 * max(1.0, abs(complex(c1))):
        return False
    if sph_dist(complex(c2).conjugate(), c3) > 1e-10:
        return False
    for z in (0.3 + 0.7j, -1.1 + 0.4j, 0.05 - 1.3j, 2.2 + 0.9j):
        a = f.eval_point(z.conjugate())
        b = f.eval_point(z)
        if is_infinity(a) or is_infinity(b):
            continue
        if abs(complex(a) - complex(b).conjugate()) > 1e-10 * max(1.0, abs(complex(b))):
            return False
    return True


def build_system(f: RationalMap, triple, n_boundary: int = 1024,
                 n_interior: int = 25, n_tile_samples: int = 512) -> SchwarzSystem:
    """Validate (f, (c1, c2, c3)) and assemble the Schwarz system.

    Raises NotInFamily when f is not of degree 3 with simple critical points,
    when the triple is not a positively oriented triple of critical points
    bounding a disc, when the univalence certificate does not pass on the
    closed disc, or when the leftover critical point fails to lie in the
    complementary disc.
    """
    if f.degree != 3:
        raise NotInFamily(f"degree {f.degree} != 3")
    cs = critical_points(f)
    if any(deg != 2 for _, deg in cs.points):
        raise NotInFamily("critical points are not all simple")
    crit = cs.sphere_points()
    if len(crit) != 4:
        raise NotInFamily("expected four simple critical points")

    snapped = []
    for c in triple:
        match, d = _match_critical(as_point(c), crit)
        if d > 1e-6:
            raise NotInFamily(f"{c} is not a critical point of f (nearest at {d:.2e})")
        snapped.append(match)
    if any(is_infinity(c) for c in snapped):
        raise NotInFamily("the ordered triple must consist of finite critical points")
    used = []
    for c in snapped:
        if any(sph_dist(c, u) < 1e-9 for u in used):
            raise NotInFamily("triple points must be distinct critical points")
        used.append(c)
    leftover = [c for c in crit if all(sph_dist(c, u) > 1e-9 for u in used)]
    if len(leftover) != 1:
        raise NotInFamily("could not isolate the remaining critical point")
    cf = leftover[0]

    c1, c2, c3 = (complex(c) for c in snapped)
    disc = disc_through(c1, c2, c3)
    if disc.kind != "disc":
        raise NotInFamily("critical triple is collinear (half-plane domains unsupported)")
    if not disc.interior_bounded:
        raise NotInFamily("triple is negatively oriented; order it so the disc is bounded")

    univ = is_univalent_on_disc(f, disc, n_boundary=n_boundary, n_interior=n_interior)
    if univ.verdict is not Univalence.UNIVALENT:
        raise NotInFamily(f"univalence certificate failed: {univ.verdict.value}"
                          + (f" ({univ.detail})" if univ.detail else ""))

    mob = mobius_from_triple((c1, c2, c3), (c1, c3, c2))
    for src, dst in ((c1, c1), (c2, c3), (c3, c2)):
        if sph_dist(apply_mobius(mob, src), dst) > 1e-12:
            raise NotInFamily("Mobius involution failed to swap the critical pair")
    if disc_contains(disc, apply_mobius(mob, disc.center), tol=_BAND) is not Region.OUTSIDE:
        raise NotInFamily("Mobius involution does not exchange the disc with its complement")
    if disc_contains(disc, cf, tol=_BAND) is not Region.OUTSIDE:
        raise NotInFamily("the remaining critical point must lie in the complementary disc")

    sigma_map = f.compose_mobius(mob)
    sigma_crit = f.eval_point(apply_mobius(mob, cf))

    theta = 2.0 * math.pi * (np.arange(n_tile_samples) + 0.37) / n_tile_samples
    boundary = f.eval_array(disc.center + disc.radius * np.exp(1j * theta))

    return SchwarzSystem(
        f=f, triple=(c1, c2, c3), cf=cf, disc=disc, mobius=mob,
        sigma_map=sigma_map, sigma_crit=sigma_crit,
        real_symmetric=_is_real_symmetric(f, (c1, c2, c3)),
        univalence=univ, boundary_samples=boundary)


# ---------------------------------------------------------------------------
# operation-style wrappers
# ---------------------------------------------------------------------------

def sigma_eval(s: SchwarzSystem, z: SpherePoint) -> SpherePoint:
    return s.sigma(z)


def sigma_derivative(s: SchwarzSystem, z: SpherePoint) -> complex:
    return s.sigma_derivative(z)


def tile_contains(tile: FundamentalTile, z: SpherePoint) -> TileRegion:
    return tile.contains(z)


def classify_point(s: SchwarzSystem, z: SpherePoint, max_iter: int = 200) -> EscapeResult:
    return s.classify(z, max_iter=max_iter)


def preimages_under_sigma(s: SchwarzSystem, w: SpherePoint):
    return s.preimages(w)


def critical_orbit_connectedness(s: SchwarzSystem, max_iter: int = 200) -> ConnectednessResult:
    return s.connectedness(max_iter=max_iter)


def find_attracting_fixed_point(s: SchwarzSystem, seeds: int = 49) -> FixedPointReport:
    rep = s.attracting_fixed_point(seeds=seeds)
    if rep is None:
        raise FixedPointNotFound("no seed converged to an attracting fixed point")
    return rep
