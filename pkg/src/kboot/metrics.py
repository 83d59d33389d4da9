"""PSNR and SSIM image-quality metrics.

PSNR uses the per-reference peak by default since phantom data is
unit-scaled rather than 8-bit; identical images return ``inf``.  SSIM uses
the standard published constants (11x11 Gaussian window, sigma 1.5,
K1 = 0.01, K2 = 0.03) and evaluates only windows fully inside the image,
which avoids any padding policy.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DimensionError, ParameterError

__all__ = ["psnr", "ssim", "MetricReport", "evaluate_pair"]


def _pair(reference, test):
    ref = np.asarray(reference, dtype=np.float64)
    tst = np.asarray(test, dtype=np.float64)
    if ref.ndim != 2 or tst.ndim != 2:
        raise DimensionError("images must be 2D")
    if ref.shape != tst.shape:
        raise DimensionError(f"shape mismatch: {ref.shape} vs {tst.shape}")
    return ref, tst


def psnr(reference, test, peak: Optional[float] = None) -> float:
    """``20 log10(peak) - 10 log10(MSE)`` in dB; ``inf`` for identical inputs.

    ``peak=None`` uses ``max(reference)``, which makes the metric invariant
    to a common positive rescaling of both images.
    """
    ref, tst = _pair(reference, test)
    if peak is None:
        peak = float(ref.max())
    if peak <= 0:
        raise ParameterError(f"peak must be > 0, got {peak}")
    mse = float(np.mean((ref - tst) ** 2))
    if mse == 0.0:
        return math.inf
    return 20.0 * math.log10(peak) - 10.0 * math.log10(mse)


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    offsets = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(offsets ** 2) / (2.0 * sigma * sigma))
    window = np.outer(g, g)
    return window / window.sum()


def _local_mean(img: np.ndarray, window: np.ndarray) -> np.ndarray:
    views = sliding_window_view(img, window.shape)
    return np.einsum("ijkl,kl->ij", views, window)


def ssim(reference, test, window_size: int = 11, sigma: float = 1.5,
         k1: float = 0.01, k2: float = 0.03,
         data_range: Optional[float] = None) -> float:
    """Mean local structural similarity over all fully interior windows.

    ``data_range=None`` uses ``max(reference)`` (falling back to 1.0 for an
    all-zero reference so the identity case stays well defined).
    """
    ref, tst = _pair(reference, test)
    if min(ref.shape) < window_size:
        raise DimensionError(
            f"image {ref.shape} smaller than the {window_size}x{window_size} window")
    if data_range is None:
        peak = float(ref.max())
        data_range = peak if peak > 0 else 1.0
    if data_range <= 0:
        raise ParameterError(f"data_range must be > 0, got {data_range}")

    window = _gaussian_window(window_size, sigma)
    mu_r = _local_mean(ref, window)
    mu_t = _local_mean(tst, window)
    var_r = _local_mean(ref * ref, window) - mu_r * mu_r
    var_t = _local_mean(tst * tst, window) - mu_t * mu_t
    cov = _local_mean(ref * tst, window) - mu_r * mu_t

    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2
    score = ((2 * mu_r * mu_t + c1) * (2 * cov + c2)
             / ((mu_r * mu_r + mu_t * mu_t + c1) * (var_r + var_t + c2)))
    return float(score.mean())


@dataclass(frozen=True)
class MetricReport:
    psnr_db: float
    ssim: float


def evaluate_pair(reference, test) -> MetricReport:
    return MetricReport(psnr_db=psnr(reference, test), ssim=ssim(reference, test))
