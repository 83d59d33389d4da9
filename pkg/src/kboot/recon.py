"""Reconstruction operators: map a subsampled k-space back to a full image.

Two interchangeable reconstructors fill the base-learner role of the
bootstrap pipeline:

* zero-filled: inverse transform with the dropped lines left at zero.  No
  energy compensation is applied; correcting the resulting intensity bias
  is the aggregation layer's job.
* iterative soft-thresholding (ISTA): approximately minimizes

      0.5 * || M F x - y ||^2  +  lam * || W x ||_1

  where ``F`` is the centered unitary FFT, ``M`` keeps the sampled lines,
  ``y`` is the measured data and ``W`` a multi-level orthonormal Haar
  transform.  Because ``F`` is unitary and ``M`` a projection, the gradient
  of the data term has Lipschitz constant 1 and a unit step size descends
  monotonically.  The iterate stays complex; after the final iteration the
  sampled lines of ``F x`` are overwritten with ``y`` (hard data
  consistency) and only then is the magnitude taken.

Both are deterministic for fixed inputs and parameters.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParameterError
from .fft import fft2c, ifft2c
from .sampling import SamplingMask, apply_mask
from .wavelet import crop_to_shape, haar_forward, haar_inverse, pad_to_multiple

__all__ = [
    "soft_threshold",
    "zero_filled",
    "default_threshold",
    "ista_solve",
    "ista_reconstruct",
    "ZeroFilledReconstructor",
    "IstaReconstructor",
    "make_reconstructor",
]


def soft_threshold(values: np.ndarray, threshold: float) -> np.ndarray:
    """Componentwise ``sign(v) * max(|v| - t, 0)``.

    For complex input the sign is ``v/|v|``, i.e. the modulus is shrunk and
    the phase kept.  ``soft_threshold(v, 0)`` returns ``v`` exactly.
    """
    if threshold < 0:
        raise ParameterError(f"threshold must be >= 0, got {threshold}")
    v = np.asarray(values)
    mag = np.abs(v)
    scale = np.maximum(1.0 - threshold / np.maximum(mag, np.finfo(np.float64).tiny), 0.0)
    return v * scale


def zero_filled(kspace_sub: np.ndarray, mask: SamplingMask) -> np.ndarray:
    """Magnitude of the inverse transform of the zero-filled spectrum."""
    return np.abs(ifft2c(apply_mask(kspace_sub, mask)))


class _PaddedHaar:
    """Haar transform behind a symmetric zero-pad so any size works.

    Zero-padding is an isometry, so coefficient norms still match image
    norms; on sides already divisible by ``2**levels`` this is the plain
    orthonormal transform.
    """

    def __init__(self, shape, levels: int, pad: bool):
        self.shape = tuple(shape)
        self.levels = levels
        div = 2 ** levels
        if not pad and (shape[0] % div or shape[1] % div):
            # Let haar_forward raise its shape error with the real numbers.
            haar_forward(np.zeros(shape), levels)
        self.pad = pad

    def forward(self, arr: np.ndarray) -> np.ndarray:
        return haar_forward(pad_to_multiple(arr, 2 ** self.levels), self.levels)

    def inverse(self, coeffs: np.ndarray) -> np.ndarray:
        return crop_to_shape(haar_inverse(coeffs, self.levels), self.shape)


def default_threshold(kspace_sub: np.ndarray, mask: SamplingMask,
                      levels: int = 3, pad: bool = True) -> float:
    """Scale-invariant default: 1% of the largest zero-filled coefficient."""
    y = apply_mask(kspace_sub, mask)
    transform = _PaddedHaar(y.shape, levels, pad)
    return 0.01 * float(np.abs(transform.forward(ifft2c(y))).max())


def ista_solve(kspace_sub: np.ndarray, mask: SamplingMask,
               lam: Optional[float] = None, iters: int = 50, levels: int = 3,
               pad: bool = True, record_objective: bool = False):
    """Run ISTA and return ``(complex_image, objectives)``.

    The complex image already has hard data consistency applied, so the
    sampled lines of its forward transform equal the measured data.
    ``objectives`` holds the post-update objective per iteration when
    ``record_objective`` is set, else an empty list.
    """
    if iters < 1:
        raise ParameterError(f"iters must be >= 1, got {iters}")
    y = apply_mask(kspace_sub, mask).astype(np.complex128)
    transform = _PaddedHaar(y.shape, levels, pad)
    if lam is None:
        lam = 0.01 * float(np.abs(transform.forward(ifft2c(y))).max())
    if lam < 0:
        raise ParameterError(f"lam must be >= 0, got {lam}")

    x = ifft2c(y)
    objectives = []
    for _ in range(iters):
        residual = apply_mask(fft2c(x), mask) - y
        x = transform.inverse(
            soft_threshold(transform.forward(x - ifft2c(residual)), lam))
        if record_objective:
            data = apply_mask(fft2c(x), mask) - y
            objectives.append(0.5 * float(np.sum(np.abs(data) ** 2))
                              + lam * float(np.sum(np.abs(transform.forward(x)))))

    spectrum = fft2c(x)
    keep2d = mask.as_2d(spectrum.shape)
    spectrum = np.where(keep2d, y, spectrum)
    return ifft2c(spectrum), objectives


def ista_reconstruct(kspace_sub: np.ndarray, mask: SamplingMask,
                     lam: Optional[float] = None, iters: int = 50,
                     levels: int = 3, pad: bool = True) -> np.ndarray:
    """Magnitude image from :func:`ista_solve`."""
    x, _ = ista_solve(kspace_sub, mask, lam=lam, iters=iters, levels=levels, pad=pad)
    return np.abs(x)


@dataclass(frozen=True)
class ZeroFilledReconstructor:
    kind = "zf"

    def reconstruct(self, kspace_sub: np.ndarray, mask: SamplingMask) -> np.ndarray:
        return zero_filled(kspace_sub, mask)


@dataclass(frozen=True)
class IstaReconstructor:
    lam: Optional[float] = None
    iters: int = 50
    levels: int = 3
    pad: bool = True
    kind = "ista"

    def reconstruct(self, kspace_sub: np.ndarray, mask: SamplingMask) -> np.ndarray:
        return ista_reconstruct(kspace_sub, mask, lam=self.lam,
                                iters=self.iters, levels=self.levels, pad=self.pad)


def make_reconstructor(kind: str, **params):
    """Factory keyed by the CLI names ``zf`` and ``ista``."""
    if kind in ("zf", "zero_filled"):
        if params:
            raise ParameterError(f"zero-filled reconstructor takes no parameters, got {params}")
        return ZeroFilledReconstructor()
    if kind == "ista":
        return IstaReconstructor(**params)
    raise ParameterError(f"unknown reconstructor kind {kind!r}")
