"""Synthetic test images: an ellipse head phantom and a textured phantom.

The head phantom uses the familiar 10-ellipse table with the
improved-contrast intensities, whose additive sum stays inside [0, 1]
everywhere.  Ellipses are rasterized at pixel centers with an exact
membership predicate (no anti-aliasing), on the symmetric grid
``x_j = (2j + 1 - n) / n`` so mirroring the grid is the same as negating
the coordinate.

The textured phantom sums seeded Gaussian bumps with a fine sinusoidal
texture; motion ghosting is much easier to see on images with
high-frequency content.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError

__all__ = ["EllipseSpec", "SHEPP_LOGAN_ELLIPSES", "rasterize_ellipses",
           "shepp_logan", "texture_phantom"]


@dataclass(frozen=True)
class EllipseSpec:
    """Additive ellipse in normalized [-1, 1] coordinates."""

    center_x: float
    center_y: float
    axis_a: float  # semi-axis along the (rotated) x direction
    axis_b: float  # semi-axis along the (rotated) y direction
    angle: float   # radians, counter-clockwise
    intensity: float

    def __post_init__(self):
        if self.axis_a <= 0 or self.axis_b <= 0:
            raise ParameterError(f"semi-axes must be > 0, got {self.axis_a}, {self.axis_b}")

    def contains(self, x, y):
        """Exact membership predicate, usable on scalars or grids."""
        dx = x - self.center_x
        dy = y - self.center_y
        cos_t = math.cos(self.angle)
        sin_t = math.sin(self.angle)
        u = (dx * cos_t + dy * sin_t) / self.axis_a
        v = (-dx * sin_t + dy * cos_t) / self.axis_b
        return u * u + v * v <= 1.0


def _deg(d: float) -> float:
    return d * math.pi / 180.0


SHEPP_LOGAN_ELLIPSES = (
    EllipseSpec(0.0, 0.0, 0.69, 0.92, 0.0, 1.0),
    EllipseSpec(0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8),
    EllipseSpec(0.22, 0.0, 0.11, 0.31, _deg(-18.0), -0.2),
    EllipseSpec(-0.22, 0.0, 0.16, 0.41, _deg(18.0), -0.2),
    EllipseSpec(0.0, 0.35, 0.21, 0.25, 0.0, 0.1),
    EllipseSpec(0.0, 0.1, 0.046, 0.046, 0.0, 0.1),
    EllipseSpec(0.0, -0.1, 0.046, 0.046, 0.0, 0.1),
    EllipseSpec(-0.08, -0.605, 0.046, 0.023, 0.0, 0.1),
    EllipseSpec(0.0, -0.605, 0.023, 0.023, 0.0, 0.1),
    EllipseSpec(0.06, -0.605, 0.023, 0.046, 0.0, 0.1),
)


def _grid(n: int) -> np.ndarray:
    # Pixel centers; symmetric under negation, exact 0 at index n//2 for odd n.
    return (2.0 * np.arange(n) + 1.0 - n) / n


def rasterize_ellipses(ellipses: Sequence[EllipseSpec], n: int) -> np.ndarray:
    """Additive rasterization on an n x n pixel-center grid, clipped to [0, 1]."""
    if n < 16:
        raise ParameterError(f"side length must be >= 16, got {n}")
    coords = _grid(n)
    ygrid, xgrid = np.meshgrid(coords, coords, indexing="ij")
    img = np.zeros((n, n))
    for ell in ellipses:
        img[ell.contains(xgrid, ygrid)] += ell.intensity
    return np.clip(img, 0.0, 1.0)


def shepp_logan(n: int) -> np.ndarray:
    """The 10-ellipse head phantom on an n x n grid, values in [0, 1]."""
    return rasterize_ellipses(SHEPP_LOGAN_ELLIPSES, n)


def texture_phantom(n: int, seed: int = 0) -> np.ndarray:
    """Smooth random blobs plus fine sinusoidal texture, normalized to [0, 1]."""
    if n < 16:
        raise ParameterError(f"side length must be >= 16, got {n}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    coords = _grid(n)
    ygrid, xgrid = np.meshgrid(coords, coords, indexing="ij")

    img = np.zeros((n, n))
    for _ in range(6):
        cx, cy = rng.uniform(-0.6, 0.6, size=2)
        sx, sy = rng.uniform(0.08, 0.3, size=2)
        amp = rng.uniform(0.4, 1.0)
        img += amp * np.exp(-((xgrid - cx) ** 2 / (2 * sx * sx)
                              + (ygrid - cy) ** 2 / (2 * sy * sy)))

    fx, fy = rng.uniform(6.0, 14.0, size=2)
    px, py = rng.uniform(0.0, 2 * math.pi, size=2)
    img += 0.15 * np.sin(2 * math.pi * fx * xgrid + px) * np.cos(2 * math.pi * fy * ygrid + py)

    img -= img.min()
    return img / img.max()
