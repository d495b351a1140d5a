"""Escape-time images of the parameter plane or of a filled Julia set, as binary PPM."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MAX_SIDE = 8192
OVERLAY_COLORS = {
    "touch": (255, 40, 40),
    "center": (40, 220, 255),
    "limit": (255, 255, 0),
    "circle": (255, 255, 255),
}


@dataclass(frozen=True)
class ImageWindow:
    center: complex
    width: float
    pixels: tuple = (512, 512)
    max_iter: int = 2048
    mode: str = "parameter"  # or "julia"
    julia_c: complex = 0j

    def __post_init__(self):
        w, h = self.pixels
        if not (isinstance(w, int) and isinstance(h, int)) or w < 1 or h < 1:
            raise ValueError("image dimensions must be positive integers")
        if w > MAX_SIDE or h > MAX_SIDE:
            raise ValueError(f"image dimensions are capped at {MAX_SIDE}")
        if not self.width > 0:
            raise ValueError("window width must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.mode not in ("parameter", "julia"):
            raise ValueError("mode must be 'parameter' or 'julia'")

    @property
    def height(self) -> float:
        return self.width * self.pixels[1] / self.pixels[0]

    def grid(self) -> np.ndarray:
        w, h = self.pixels
        step = self.width / w
        xs = self.center.real + (np.arange(w) - (w - 1) / 2) * step
        ys = self.center.imag - (np.arange(h) - (h - 1) / 2) * step  # top row is largest Im
        return xs[None, :] + 1j * ys[:, None]

    def to_pixel(self, z: complex) -> Optional[tuple]:
        w, h = self.pixels
        step = self.width / w
        col = round((z.real - self.center.real) / step + (w - 1) / 2)
        row = round(-(z.imag - self.center.imag) / step + (h - 1) / 2)
        if 0 <= col < w and 0 <= row < h:
            return row, col
        return None


def escape_counts(window: ImageWindow) -> np.ndarray:
    """Smooth escape counts; -1 for points that never leave the bailout radius 1e3."""
    grid = window.grid()
    if window.mode == "parameter":
        c = grid.ravel().copy()
        z = np.zeros_like(c)
    else:
        z = grid.ravel().copy()
        c = np.full_like(z, window.julia_c)
    out = np.full(z.shape, -1.0)
    active = np.arange(z.size)
    bailout = 1e3
    for k in range(window.max_iter):
        z = z * z + c
        mag = np.abs(z)
        esc = mag > bailout
        if esc.any():
            nu = k + 1 - np.log2(np.log(mag[esc]))
            out[active[esc]] = nu
            keep = ~esc
            z, c, active = z[keep], c[keep], active[keep]
            if active.size == 0:
                break
    return out.reshape(grid.shape)


def colorize(counts: np.ndarray) -> np.ndarray:
    """Fixed cosine palette; bounded points are black."""
    rgb = np.zeros(counts.shape + (3,), dtype=np.uint8)
    esc = counts >= 0
    s = np.sqrt(counts[esc] + 1.0) * 0.35
    phases = np.array([0.0, 2.1, 4.2])
    vals = 0.5 + 0.5 * np.cos(s[:, None] + phases[None, :])
    rgb[esc] = np.round(40 + 215 * vals).astype(np.uint8)
    return rgb


def _mark(rgb: np.ndarray, window: ImageWindow, z: complex, color, size: int = 2):
    pix = window.to_pixel(complex(z))
    if pix is None:
        return
    r, c = pix
    h, w = rgb.shape[:2]
    for d in range(-size, size + 1):
        if 0 <= r + d < h:
            rgb[r + d, c] = color
        if 0 <= c + d < w:
            rgb[r, c + d] = color


def _circle(rgb: np.ndarray, window: ImageWindow, center: complex, radius: float, color):
    n = max(64, int(8 * radius / window.width * window.pixels[0]))
    for k in range(n):
        pix = window.to_pixel(center + radius * complex(math.cos(2 * math.pi * k / n),
                                                        math.sin(2 * math.pi * k / n)))
        if pix is not None:
            rgb[pix] = color


@dataclass(frozen=True)
class Overlays:
    touch_points: Sequence = ()
    centers: Sequence = ()
    limit: Optional[complex] = None
    delta_circle: Optional[float] = None


def render(window: ImageWindow, overlays: Overlays = Overlays()) -> np.ndarray:
    rgb = colorize(escape_counts(window))
    if window.mode == "parameter":
        for z in overlays.centers:
            _mark(rgb, window, z, OVERLAY_COLORS["center"])
        for z in overlays.touch_points:
            _mark(rgb, window, z, OVERLAY_COLORS["touch"])
        if overlays.limit is not None:
            _mark(rgb, window, overlays.limit, OVERLAY_COLORS["limit"], size=3)
    elif overlays.delta_circle:
        _circle(rgb, window, 0j, overlays.delta_circle, OVERLAY_COLORS["circle"])
    return rgb


def ppm_bytes(rgb: np.ndarray) -> bytes:
    h, w = rgb.shape[:2]
    return f"P6\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(rgb, np.uint8).tobytes()


def read_ppm(data: bytes) -> np.ndarray:
    """Parse a binary P6 image written by :func:`ppm_bytes`."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h = (int(x) for x in parts[1].split())
    if int(parts[2]) != 255:
        raise ValueError("only 8-bit PPM is supported")
    body = parts[3]
    if len(body) != w * h * 3:
        raise ValueError("PPM body size does not match the header")
    return np.frombuffer(body, np.uint8).reshape(h, w, 3)
