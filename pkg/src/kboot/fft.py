"""Centered, orthonormal 2D Fourier transforms between image and k-space.

Conventions used throughout the toolkit:

* axis 0 is the frequency-encoding (read-out) direction, axis 1 is the
  phase-encoding direction,
* the DC sample sits at index ``(n_fe // 2, n_pe // 2)``,
* the normalized frequency of phase-encode column ``i`` is
  ``k_y = 2*pi*(i - n_pe//2)/n_pe`` radians per pixel, so ``k_y`` spans
  ``[-pi, pi)``,
* both directions are unitary (``1/sqrt(n*m)`` each way), so Parseval holds
  and the data-fidelity gradient used by the iterative reconstructor has
  Lipschitz constant 1.

NumPy's ``fft2`` puts DC in the corner; ``ifftshift`` before and
``fftshift`` after move the origin to the grid center in both domains.
"""

import numpy as np

from .errors import DimensionError

__all__ = ["forward", "inverse", "fft2c", "ifft2c", "ky_coords"]


def _check_2d(arr, what: str) -> np.ndarray:
    a = np.asarray(arr)
    if a.ndim != 2:
        raise DimensionError(f"{what} must be 2D, got {a.ndim}D")
    if a.shape[0] < 2 or a.shape[1] < 2:
        raise DimensionError(f"{what} sides must be >= 2, got {a.shape}")
    return a


def fft2c(arr: np.ndarray) -> np.ndarray:
    """Centered unitary 2D FFT (accepts real or complex input)."""
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(arr), norm="ortho"))


def ifft2c(arr: np.ndarray) -> np.ndarray:
    """Centered unitary inverse 2D FFT; exact inverse of :func:`fft2c`."""
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(arr), norm="ortho"))


def forward(image: np.ndarray) -> np.ndarray:
    """Transform a magnitude image into DC-centered k-space.

    Parameters
    ----------
    image : 2D real array, sides >= 2.

    Returns
    -------
    Complex k-space of the same shape, DC at ``(n_fe//2, n_pe//2)``.
    """
    img = _check_2d(image, "image")
    return fft2c(img)


def inverse(kspace: np.ndarray) -> np.ndarray:
    """Return the pixelwise magnitude of the unitary inverse transform."""
    k = _check_2d(kspace, "kspace")
    return np.abs(ifft2c(k))


def ky_coords(n_pe: int) -> np.ndarray:
    """Normalized phase-encode frequencies, radians per pixel in [-pi, pi)."""
    if n_pe < 2:
        raise DimensionError(f"n_pe must be >= 2, got {n_pe}")
    return 2.0 * np.pi * (np.arange(n_pe) - n_pe // 2) / n_pe
