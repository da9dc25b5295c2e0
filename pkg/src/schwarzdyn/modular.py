"""The group generated by z -> -1/z and z -> z+2 inside PSL(2, Z), its
piecewise reduction map on the upper half-plane, word algebra over the
alphabet {a, b, B} (a = the involution, b = the translation, B = its
inverse), and the higher-degree Fuchsian analogue built from circles
orthogonal to the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from .errors import (InsideFundamentalDomain, NotInAnyCircle,
                     SchwarzdynError)
from .sphere import INFINITY, MobiusMap, SpherePoint, as_point, is_infinity

_D_BAND = 1e-12  # closed fundamental-domain membership band

ALPHABET = "abB"
_INVERSE_LETTER = {"a": "a", "b": "B", "B": "b"}

_GEN_MATRICES = {
    "a": (0, -1, 1, 0),   # z -> -1/z
    "b": (1, 2, 0, 1),    # z -> z + 2
    "B": (1, -2, 0, 1),   # z -> z - 2
}


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """2x2 integer matrix of determinant 1, identified with its negative.

    The stored representative has its first nonzero entry (in the order
    a, b, c, d) positive.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise SchwarzdynError("determinant must be 1")
        for v in (self.a, self.b, self.c, self.d):
            if v != 0:
                if v < 0:
                    object.__setattr__(self, "a", -self.a)
                    object.__setattr__(self, "b", -self.b)
                    object.__setattr__(self, "c", -self.c)
                    object.__setattr__(self, "d", -self.d)
                break

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def as_mobius(self) -> MobiusMap:
        return MobiusMap(self.a, self.b, self.c, self.d)

    @staticmethod
    def identity() -> "GroupElement":
        return GroupElement(1, 0, 0, 1)


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def reduce_word(letters: str) -> str:
    """Freely reduce: drop aa, bB, Bb adjacencies until none remain."""
    out = []
    for ch in letters:
        if ch not in ALPHABET:
            raise SchwarzdynError(f"letter {ch!r} not in alphabet {ALPHABET!r}")
        if out and _INVERSE_LETTER[out[-1]] == ch:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; the empty word is the identity."""

    letters: str

    def __post_init__(self):
        object.__setattr__(self, "letters", reduce_word(self.letters))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters

    def inverse(self) -> "Word":
        return Word("".join(_INVERSE_LETTER[ch] for ch in reversed(self.letters)))

    def matrix(self) -> GroupElement:
        """Product of generator matrices in written order (the leftmost letter
        acts last)."""
        g = GroupElement.identity()
        for ch in self.letters:
            g = g @ GroupElement(*_GEN_MATRICES[ch])
        return g


def enumerate_reduced_words(max_len: int, min_len: int = 1) -> Iterator[str]:
    """All freely reduced words with min_len <= length <= max_len, shortest
    first, lexicographic within a length."""

    def extend(prefix: str):
        if len(prefix) >= min_len:
            yield prefix
        if len(prefix) == max_len:
            return
        for ch in ALPHABET:
            if prefix and _INVERSE_LETTER[prefix[-1]] == ch:
                continue
            yield from extend(prefix + ch)

    if min_len == 0:
        yield ""
    for ch in ALPHABET:
        yield from extend(ch)


# ---------------------------------------------------------------------------
# generator action and the fundamental domain
# ---------------------------------------------------------------------------

def _alpha(z: SpherePoint) -> SpherePoint:
    if is_infinity(z):
        return 0j
    z = complex(z)
    if z == 0:
        return INFINITY
    return -1.0 / z


def _beta(z: SpherePoint) -> SpherePoint:
    return INFINITY if is_infinity(z) else complex(z) + 2.0


def _beta_inv(z: SpherePoint) -> SpherePoint:
    return INFINITY if is_infinity(z) else complex(z) - 2.0


_GEN_ACTION = {"a": _alpha, "b": _beta, "B": _beta_inv}


def apply_word(w, z: SpherePoint) -> SpherePoint:
    """Apply the word as a composition: the rightmost letter acts first, so
    apply_word("ab", z) is alpha(beta(z))."""
    letters = w.letters if isinstance(w, Word) else str(w)
    z = as_point(z)
    for ch in reversed(letters):
        z = _GEN_ACTION[ch](z)
    return z


def in_closed_fundamental_domain(z: complex, band: float = _D_BAND) -> bool:
    """Closure of {-1 < Re z < 1, |z| > 1} in the upper half-plane, widened by
    `band` so the reduction terminates on boundary hits."""
    z = complex(z)
    if z.imag <= 0:
        return False
    return abs(z.real) <= 1.0 + band and abs(z) >= 1.0 - band


def in_fundamental_domain_interior(z: complex, band: float = _D_BAND) -> bool:
    z = complex(z)
    if z.imag <= 0:
        return False
    return abs(z.real) < 1.0 - band and abs(z) > 1.0 + band


def in_strict_fundamental_domain(z: complex, band: float = _D_BAND) -> bool:
    """The exact fundamental domain: the open region together with its left
    vertical edge and the left half of its circular edge (Re <= 0)."""
    z = complex(z)
    if z.imag <= 0:
        return False
    if in_fundamental_domain_interior(z, band):
        return True
    if abs(z.real + 1.0) <= band and abs(z) >= 1.0 - band:
        return True
    if abs(abs(z) - 1.0) <= band and -1.0 - band <= z.real <= band:
        return True
    return False


def rho_step(z: complex) -> complex:
    """One application of the piecewise reduction map: the involution on
    |z| < 1, the inverse translation on Re z > 1, the translation on
    Re z < -1.  Defined off the closed fundamental domain."""
    z = complex(z)
    if not z.imag > 0:
        raise SchwarzdynError("rho_step requires Im z > 0")
    if in_closed_fundamental_domain(z):
        raise InsideFundamentalDomain(f"{z} lies in the closed fundamental domain")
    if abs(z) < 1.0:
        return complex(_alpha(z))
    if z.real > 1.0:
        return z - 2.0
    return z + 2.0


def _fired_letter(z: complex) -> str:
    if abs(z) < 1.0:
        return "a"
    return "B" if z.real > 1.0 else "b"


@dataclass(frozen=True)
class ReduceResult:
    point: complex
    word: Word          # the branches applied, in firing order
    steps: int
    completed: bool     # False when max_steps was exhausted


def reduce_to_fundamental(z: complex, max_steps: int = 64) -> ReduceResult:
    """Iterate rho_step until the closed fundamental domain is reached."""
    z = complex(z)
    if not z.imag > 0:
        raise SchwarzdynError("reduction requires Im z > 0")
    fired = []
    for k in range(max_steps + 1):
        if in_closed_fundamental_domain(z):
            return ReduceResult(z, _raw_word("".join(fired)), k, True)
        fired.append(_fired_letter(z))
        z = rho_step(z)
    return ReduceResult(z, _raw_word("".join(fired)), max_steps, False)


def _raw_word(letters: str) -> Word:
    # firing sequences are reduced already; Word() re-checks cheaply
    return Word(letters)


def word_return_check(w, samples: int = 10, seed: int = 0) -> bool:
    """True when, for `samples` random points of the fundamental domain, the
    reduction undoes the word in exactly len(w) steps and lands within 1e-9
    of the starting point."""
    word = w if isinstance(w, Word) else Word(str(w))
    n = len(word)
    if n < 1:
        raise SchwarzdynError("word_return_check needs a nonempty word")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        z = complex(rng.uniform(-0.95, 0.95), rng.uniform(1.05, 2.5))
        y = apply_word(word, z)
        if is_infinity(y):
            return False
        r = reduce_to_fundamental(complex(y), max_steps=n + 8)
        if not (r.completed and r.steps == n and abs(r.point - z) < 1e-9):
            return False
    return True


# vectorized reduction, used by the tiling renderer
def reduce_grid(z: np.ndarray, max_steps: int):
    """Steps-to-domain and first fired letter (0 none, 1 a, 2 b, 3 B) for an
    array of upper half-plane points; steps = max_steps+1 marks unfinished,
    -1 marks points outside the upper half-plane."""
    z = np.asarray(z, dtype=complex)
    steps = np.full(z.shape, max_steps + 1, dtype=np.int32)
    first = np.zeros(z.shape, dtype=np.uint8)
    upper = z.imag > 0
    steps[~upper] = -1
    cur = z.copy()
    active = upper.copy()
    for k in range(max_steps + 1):
        inside = active & (np.abs(cur.real) <= 1.0 + _D_BAND) & (np.abs(cur) >= 1.0 - _D_BAND)
        steps[inside] = k
        active &= ~inside
        if k == max_steps or not np.any(active):
            break
        amask = active & (np.abs(cur) < 1.0)
        Bmask = active & ~amask & (cur.real > 1.0)
        bmask = active & ~amask & ~Bmask
        if k == 0:
            first[amask] = 1
            first[bmask] = 2
            first[Bmask] = 3
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = -1.0 / np.where(cur == 0, np.nan, cur)
        cur = np.where(amask, inv, cur)
        cur = np.where(Bmask, cur - 2.0, cur)
        cur = np.where(bmask, cur + 2.0, cur)
        dead = active & ~np.isfinite(cur)
        steps[dead] = -1
        active &= ~dead
    return steps, first


# ---------------------------------------------------------------------------
# boundary (extended-real) restriction of the reduction map
# ---------------------------------------------------------------------------

def rho_boundary(t):
    """The reduction map on the extended real line; infinity is fixed and the
    endpoints +-1 go to their common image -+1."""
    if t is INFINITY or is_infinity(as_point(t)):
        return INFINITY
    t = float(t)
    if t >= 1.0:
        return t - 2.0
    if t <= -1.0:
        return t + 2.0
    if t == 0.0:
        return INFINITY
    return -1.0 / t


# ---------------------------------------------------------------------------
# higher-degree Fuchsian circle sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FuchsianCircleSet:
    """d+1 circles of common radius tan(pi/(d+1)) meeting the unit circle at
    right angles at consecutive (d+1)-th roots of unity, with the generating
    maps z -> conj(center) + r^2/(z - center) for the first half of the
    indices."""

    d: int
    radius: float
    centers: Tuple[complex, ...]
    generator_indices: Tuple[int, ...]

    def generator(self, j: int) -> MobiusMap:
        """The generating map attached to circle j (1-based)."""
        zj = self.centers[j - 1]
        return MobiusMap(zj.conjugate(), self.radius ** 2 - abs(zj) ** 2, 1.0, -zj)

    def circle_index(self, z: complex) -> Optional[int]:
        """1-based index of the circle strictly containing z, if any."""
        z = complex(z)
        for j, c in enumerate(self.centers, start=1):
            if abs(z - c) < self.radius:
                return j
        return None


def gamma_d_circles(d: int) -> FuchsianCircleSet:
    if d < 2:
        raise SchwarzdynError("d must be >= 2")
    n = d + 1
    r = math.tan(math.pi / n)
    rho = 1.0 / math.cos(math.pi / n)
    centers = tuple(rho * complex(math.cos(2 * math.pi * (j - 0.5) / n),
                                  math.sin(2 * math.pi * (j - 0.5) / n))
                    for j in range(1, n + 1))
    n_gen = d // 2 + 1 if d % 2 == 0 else (d + 1) // 2
    return FuchsianCircleSet(d=d, radius=r, centers=centers,
                             generator_indices=tuple(range(1, n_gen + 1)))


def rho_d_step(cs: FuchsianCircleSet, z: complex) -> complex:
    """Apply the map attached to the circle strictly containing z."""
    z = complex(z)
    j = cs.circle_index(z)
    if j is None:
        raise NotInAnyCircle(f"{z} is not strictly inside any generating circle")
    zj = cs.centers[j - 1]
    return zj.conjugate() + cs.radius ** 2 / (z - zj)


def reduce_grid_d(cs: FuchsianCircleSet, z: np.ndarray, max_steps: int):
    """Disc-model analogue of reduce_grid: steps until the central tile
    (inside the unit disc, outside every circle) and the first circle index."""
    z = np.asarray(z, dtype=complex)
    steps = np.full(z.shape, max_steps + 1, dtype=np.int32)
    first = np.zeros(z.shape, dtype=np.uint8)
    inside_disc = np.abs(z) < 1.0
    steps[~inside_disc] = -1
    cur = z.copy()
    active = inside_disc.copy()
    centers = np.array(cs.centers)
    r = cs.radius
    for k in range(max_steps + 1):
        dmat = np.abs(cur[..., None] - centers)  # (..., d+1)
        inany = np.any(dmat < r, axis=-1)
        done = active & ~inany
        steps[done] = k
        active &= ~done
        if k == max_steps or not np.any(active):
            break
        jidx = np.argmax(dmat < r, axis=-1)
        if k == 0:
            first[active] = (jidx[active] + 1).astype(np.uint8)
        zj = centers[jidx]
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = np.conj(zj) + (r * r) / (cur - zj)
        cur = np.where(active, nxt, cur)
        dead = active & ~np.isfinite(cur)
        steps[dead] = -1
        active &= ~dead
    return steps, first
