"""Deterministic rasterization: dynamical planes, parameter planes, group
tilings, flow curves, and bit-exact PPM / CSV output.

Pixel centers are sampled (never corners), row 0 is the top of the image
(largest imaginary part), and parallel rendering distributes whole rows to
workers while every per-pixel computation is independent of the chunking,
so output bytes do not depend on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import NotInFamily, SchwarzdynError
from .family import ft_system
from .modular import FuchsianCircleSet, gamma_d_circles, reduce_grid, reduce_grid_d
from .schwarz import (_ST_BOUNDED, _ST_CONVERGED, _ST_ESCAPING, ConnVerdict,
                      SchwarzSystem)

# ---------------------------------------------------------------------------
# viewport and image buffer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Viewport:
    """A complex-plane window on a pixel grid with square pixels."""

    center: complex
    width: float
    px_w: int
    px_h: int

    def __post_init__(self):
        if self.px_w < 16 or self.px_h < 16:
            raise SchwarzdynError("viewport needs at least 16x16 pixels")
        if not self.width > 0:
            raise SchwarzdynError("viewport width must be positive")

    @property
    def height(self) -> float:
        return self.width * self.px_h / self.px_w

    def pixel_center(self, i: int, j: int) -> complex:
        """Center of column i, row j; row 0 has the largest imaginary part."""
        x = self.center.real + ((i + 0.5) / self.px_w - 0.5) * self.width
        y = self.center.imag + (0.5 - (j + 0.5) / self.px_h) * self.height
        return complex(x, y)

    def row_points(self, j: int) -> np.ndarray:
        i = np.arange(self.px_w)
        x = self.center.real + ((i + 0.5) / self.px_w - 0.5) * self.width
        y = self.center.imag + (0.5 - (j + 0.5) / self.px_h) * self.height
        return x + 1j * y

    def grid(self) -> np.ndarray:
        i = np.arange(self.px_w)
        j = np.arange(self.px_h)
        x = self.center.real + ((i + 0.5) / self.px_w - 0.5) * self.width
        y = self.center.imag + (0.5 - (j + 0.5) / self.px_h) * self.height
        return x[None, :] + 1j * y[:, None]

    def pixel_of(self, z: complex) -> Tuple[int, int]:
        """(column, row) of the pixel cell containing z."""
        i = int(math.floor((z.real - (self.center.real - 0.5 * self.width))
                           / self.width * self.px_w))
        j = int(math.floor(((self.center.imag + 0.5 * self.height) - z.imag)
                           / self.height * self.px_h))
        return min(max(i, 0), self.px_w - 1), min(max(j, 0), self.px_h - 1)


@dataclass
class ImageBuffer:
    pixels: np.ndarray  # (h, w, 3) uint8

    def __post_init__(self):
        self.pixels = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise SchwarzdynError("image buffer must be (h, w, 3)")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @staticmethod
    def blank(width: int, height: int, color=(0, 0, 0)) -> "ImageBuffer":
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[:, :] = color
        return ImageBuffer(px)


# ---------------------------------------------------------------------------
# color schemes
# ---------------------------------------------------------------------------

def _lerp_ramp(c0, c1, n) -> Tuple[Tuple[int, int, int], ...]:
    out = []
    for k in range(n):
        t = k / (n - 1)
        out.append(tuple(int(round(a + (b - a) * t)) for a, b in zip(c0, c1)))
    return tuple(out)


@dataclass(frozen=True)
class ColorScheme:
    """Palette for classification rasters.  The escape ramp cycles with
    period 16; undetermined pixels get their own loud color so numerical
    honesty stays visible in the output."""

    tile: Tuple[int, int, int] = (8, 48, 72)
    escape_ramp: Tuple[Tuple[int, int, int], ...] = field(
        default_factory=lambda: _lerp_ramp((64, 224, 208), (8, 40, 112), 16))
    converged: Tuple[int, int, int] = (247, 112, 157)
    bounded: Tuple[int, int, int] = (168, 48, 96)
    undetermined: Tuple[int, int, int] = (255, 240, 0)
    outside: Tuple[int, int, int] = (0, 0, 0)
    not_in_family: Tuple[int, int, int] = (128, 128, 128)
    background: Tuple[int, int, int] = (16, 16, 16)
    unfinished: Tuple[int, int, int] = (64, 64, 64)
    letter_bases: Tuple[Tuple[int, int, int], ...] = (
        (228, 120, 70), (90, 170, 90), (100, 130, 220), (200, 180, 80),
        (170, 90, 190), (90, 190, 190), (210, 100, 140), (140, 140, 140))

    def escape_color(self, depth: int) -> Tuple[int, int, int]:
        if depth == 0:
            return self.tile
        return self.escape_ramp[(depth - 1) % len(self.escape_ramp)]


def default_scheme() -> ColorScheme:
    return ColorScheme()


# ---------------------------------------------------------------------------
# dynamical plane
# ---------------------------------------------------------------------------

def _classify_rows(system: SchwarzSystem, viewport: Viewport,
                   rows: Sequence[int], max_iter: int):
    status = np.empty((len(rows), viewport.px_w), dtype=np.uint8)
    depth = np.empty((len(rows), viewport.px_w), dtype=np.int32)
    for k, j in enumerate(rows):
        st, dp, _ = system.classify_batch(viewport.row_points(j), max_iter)
        status[k] = st
        depth[k] = dp
    return status, depth


def _classify_rows_job(args):
    system, viewport, rows, max_iter = args
    return _classify_rows(system, viewport, rows, max_iter)


def classification_grid(system: SchwarzSystem, viewport: Viewport,
                        max_iter: int, workers: int = 1):
    """Per-pixel orbit classification at pixel centers: (status, depth) arrays
    of shape (px_h, px_w).  Row-parallel; output independent of workers."""
    system.attracting_fixed_point()  # resolve the cache before forking
    all_rows = list(range(viewport.px_h))
    if workers <= 1:
        return _classify_rows(system, viewport, all_rows, max_iter)
    nblocks = min(workers * 4, viewport.px_h)
    blocks = [all_rows[b::nblocks] for b in range(nblocks)]
    blocks = [sorted(b) for b in blocks if b]
    status = np.empty((viewport.px_h, viewport.px_w), dtype=np.uint8)
    depth = np.empty((viewport.px_h, viewport.px_w), dtype=np.int32)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        jobs = [(system, viewport, rows, max_iter) for rows in blocks]
        for rows, (st, dp) in zip(blocks, ex.map(_classify_rows_job, jobs)):
            status[rows] = st
            depth[rows] = dp
    return status, depth


def colorize_classification(status: np.ndarray, depth: np.ndarray,
                            scheme: ColorScheme) -> ImageBuffer:
    h, w = status.shape
    px = np.empty((h, w, 3), dtype=np.uint8)
    px[:, :] = scheme.undetermined
    esc = status == _ST_ESCAPING
    px[esc & (depth == 0)] = scheme.tile
    ramp = np.array(scheme.escape_ramp, dtype=np.uint8)
    deep = esc & (depth > 0)
    px[deep] = ramp[(depth[deep] - 1) % len(ramp)]
    px[status == _ST_CONVERGED] = scheme.converged
    px[status == _ST_BOUNDED] = scheme.bounded
    return ImageBuffer(px)


def render_dynamical_plane(system: SchwarzSystem, viewport: Viewport,
                           max_iter: int, scheme: Optional[ColorScheme] = None,
                           workers: int = 1) -> ImageBuffer:
    scheme = scheme or default_scheme()
    status, depth = classification_grid(system, viewport, max_iter, workers)
    return colorize_classification(status, depth, scheme)


# ---------------------------------------------------------------------------
# parameter plane
# ---------------------------------------------------------------------------

class ParamVerdict(Enum):
    NOT_IN_FAMILY = 0
    CONNECTED = 1
    DISCONNECTED = 2
    UNDETERMINED = 3


@dataclass(frozen=True)
class ParameterSample:
    t: complex
    verdict: ParamVerdict
    depth: Optional[int] = None
    detail: str = ""


def parameter_verdict(t, max_iter: int = 200, n_boundary: int = 1024,
                      n_interior: int = 25) -> ParameterSample:
    """Connectedness verdict for the parameter t: build the system (if the
    family requirements hold) and test whether the orbit of the critical
    point of sigma escapes."""
    t = complex(t)
    try:
        system = ft_system(t, n_boundary=n_boundary, n_interior=n_interior)
    except NotInFamily as e:
        return ParameterSample(t, ParamVerdict.NOT_IN_FAMILY, detail=str(e))
    conn = system.connectedness(max_iter=max_iter)
    if conn.verdict is ConnVerdict.CONNECTED:
        return ParameterSample(t, ParamVerdict.CONNECTED)
    if conn.verdict is ConnVerdict.DISCONNECTED:
        return ParameterSample(t, ParamVerdict.DISCONNECTED, depth=conn.depth)
    return ParameterSample(t, ParamVerdict.UNDETERMINED)


def scan_parameter_interval(t_min: float, t_max: float, n: int,
                            max_iter: int = 200, n_boundary: int = 1024,
                            n_interior: int = 25) -> List[ParameterSample]:
    """Verdicts along n evenly spaced real parameters, endpoints included."""
    ts = np.linspace(t_min, t_max, n)
    return [parameter_verdict(float(t), max_iter, n_boundary, n_interior) for t in ts]


def _param_pixel_job(args):
    t, max_iter, n_boundary, n_interior = args
    s = parameter_verdict(t, max_iter, n_boundary, n_interior)
    return s.verdict.value, -1 if s.depth is None else s.depth


def render_parameter_plane(t_viewport: Viewport, max_iter: int = 200,
                           scheme: Optional[ColorScheme] = None,
                           workers: int = 1, n_boundary: int = 256,
                           n_interior: int = 16) -> ImageBuffer:
    """Color each parameter pixel by its connectedness verdict.  The
    univalence sampling resolution trades speed for certificate strength."""
    scheme = scheme or default_scheme()
    grid = t_viewport.grid()
    flat = grid.ravel()
    jobs = [(complex(t), max_iter, n_boundary, n_interior) for t in flat]
    if workers <= 1:
        results = [_param_pixel_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_param_pixel_job, jobs, chunksize=16))
    codes = np.array([r[0] for r in results], dtype=np.int32).reshape(grid.shape)
    depth = np.array([r[1] for r in results], dtype=np.int32).reshape(grid.shape)
    px = np.empty(grid.shape + (3,), dtype=np.uint8)
    px[:, :] = scheme.undetermined
    px[codes == ParamVerdict.NOT_IN_FAMILY.value] = scheme.not_in_family
    px[codes == ParamVerdict.CONNECTED.value] = scheme.converged
    ramp = np.array(scheme.escape_ramp, dtype=np.uint8)
    dis = codes == ParamVerdict.DISCONNECTED.value
    px[dis] = ramp[np.maximum(depth[dis] - 1, 0) % len(ramp)]
    return ImageBuffer(px)


# ---------------------------------------------------------------------------
# flow curves
# ---------------------------------------------------------------------------

def flow_curves(t_list: Sequence[float], samples: int = 512) -> List[np.ndarray]:
    """Images of the critical circle of f_t, t in t_list, closed polylines
    (first point repeated at the end)."""
    if samples < 8:
        raise SchwarzdynError("samples must be >= 8")
    curves = []
    for t in t_list:
        system = ft_system(complex(t))
        k = np.arange(samples + 1) % samples
        theta = 2.0 * math.pi * k / samples
        zeta = system.disc.center + system.disc.radius * np.exp(1j * theta)
        curves.append(system.f.eval_array(zeta))
    return curves


def _draw_polyline(img: ImageBuffer, viewport: Viewport, pts: np.ndarray, color):
    px = img.pixels
    for a, b in zip(pts[:-1], pts[1:]):
        seg = abs(b - a)
        n = max(2, int(math.ceil(seg / viewport.width * viewport.px_w * 2)))
        for s in range(n + 1):
            z = a + (b - a) * (s / n)
            i, j = viewport.pixel_of(complex(z))
            px[j, i] = color


def render_flow_curves(t_list: Sequence[float], samples: int = 512,
                       px: int = 512, scheme: Optional[ColorScheme] = None):
    """(curves, overlay image) for the family flow; the viewport is the
    common bounding box of all curves with a 5% margin."""
    scheme = scheme or default_scheme()
    curves = flow_curves(t_list, samples)
    allpts = np.concatenate(curves)
    xmin, xmax = allpts.real.min(), allpts.real.max()
    ymin, ymax = allpts.imag.min(), allpts.imag.max()
    span = max(xmax - xmin, ymax - ymin) * 1.1
    center = complex((xmin + xmax) / 2.0, (ymin + ymax) / 2.0)
    viewport = Viewport(center, span, px, px)
    img = ImageBuffer.blank(px, px, scheme.background)
    for k, curve in enumerate(curves):
        color = scheme.letter_bases[k % len(scheme.letter_bases)]
        _draw_polyline(img, viewport, curve, color)
    return curves, img


# ---------------------------------------------------------------------------
# group tilings
# ---------------------------------------------------------------------------

def _depth_shade(base, k: int, kmax: int):
    f = 0.45 + 0.55 * (kmax - k + 1) / (kmax + 1)
    return tuple(int(round(c * f)) for c in base)


def render_group_tiling(model: str = "gamma", d: int = 3, word_len_max: int = 6,
                        viewport: Optional[Viewport] = None,
                        scheme: Optional[ColorScheme] = None) -> ImageBuffer:
    """Tiles of the half-plane group (model "gamma") or of the disc-model
    circle group (model "gamma_d"), colored by reduction step count and the
    first letter / circle index."""
    if word_len_max > 8:
        raise SchwarzdynError("word_len_max must be <= 8")
    scheme = scheme or default_scheme()
    if model == "gamma":
        viewport = viewport or Viewport(0.0 + 1.1j, 6.0, 768, 768 * 2 // 5)
        steps, first = reduce_grid(viewport.grid(), word_len_max)
        n_letters = 3
    elif model == "gamma_d":
        cs: FuchsianCircleSet = gamma_d_circles(d)
        viewport = viewport or Viewport(0j, 2.1, 640, 640)
        steps, first = reduce_grid_d(cs, viewport.grid(), word_len_max)
        n_letters = d + 1
    else:
        raise SchwarzdynError(f"unknown tiling model {model!r}")
    px = np.empty(steps.shape + (3,), dtype=np.uint8)
    px[:, :] = scheme.background
    px[steps == 0] = scheme.tile
    px[steps == word_len_max + 1] = scheme.unfinished
    for k in range(1, word_len_max + 1):
        for letter in range(1, n_letters + 1):
            mask = (steps == k) & (first == letter)
            base = scheme.letter_bases[(letter - 1) % len(scheme.letter_bases)]
            px[mask] = _depth_shade(base, k, word_len_max)
    return ImageBuffer(px)


# ---------------------------------------------------------------------------
# file output
# ---------------------------------------------------------------------------

def write_ppm(img: ImageBuffer, path) -> None:
    """Binary P6: ASCII header, then RGB byte triples row-major from the top
    row.  Bit-exact for fixed input."""
    with open(path, "wb") as fh:
        fh.write(f"P6\n{img.width} {img.height}\n255\n".encode("ascii"))
        fh.write(img.pixels.tobytes())


def read_ppm(path) -> ImageBuffer:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P6"):
        raise SchwarzdynError("not a binary PPM file")
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[2] != b"255":
        raise SchwarzdynError("unsupported PPM header")
    w, h = (int(v) for v in parts[1].split())
    raw = parts[3][: w * h * 3]
    px = np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3)
    return ImageBuffer(px.copy())


def write_csv_curve(points: Sequence[complex], path) -> None:
    """Header "re,im", one point per line at 17 significant digits (exact
    values take their shortest canonical form), LF endings."""
    with open(path, "w", newline="\n") as fh:
        fh.write("re,im\n")
        for z in points:
            z = complex(z)
            fh.write("%.17g,%.17g\n" % (z.real, z.imag))
