"""Orthonormal multi-level 2D Haar transform.

Each level splits the current low-pass block into average and difference
halves along both axes with a ``1/sqrt(2)`` factor, then recurses on the
top-left quadrant.  The transform is unitary, so the l2 norm of the
coefficients equals the l2 norm of the input and the inverse is exact up
to floating-point rounding.  Works on real and complex arrays.

Sides must be divisible by ``2**levels``; :func:`pad_to_multiple` /
:func:`crop_to_shape` provide the symmetric zero-pad used when they are not.
"""

import math

import numpy as np

from .errors import DimensionError

__all__ = ["haar_forward", "haar_inverse", "pad_to_multiple", "crop_to_shape"]

_SQRT2 = math.sqrt(2.0)


def _split(block: np.ndarray, axis: int) -> np.ndarray:
    even = block.take(np.arange(0, block.shape[axis], 2), axis=axis)
    odd = block.take(np.arange(1, block.shape[axis], 2), axis=axis)
    return np.concatenate([(even + odd) / _SQRT2, (even - odd) / _SQRT2], axis=axis)


def _merge(block: np.ndarray, axis: int) -> np.ndarray:
    half = block.shape[axis] // 2
    lo = block.take(np.arange(half), axis=axis)
    hi = block.take(np.arange(half, 2 * half), axis=axis)
    out = np.empty_like(block)
    idx_even = [slice(None)] * block.ndim
    idx_odd = [slice(None)] * block.ndim
    idx_even[axis] = slice(0, None, 2)
    idx_odd[axis] = slice(1, None, 2)
    out[tuple(idx_even)] = (lo + hi) / _SQRT2
    out[tuple(idx_odd)] = (lo - hi) / _SQRT2
    return out


def _check(arr: np.ndarray, levels: int) -> np.ndarray:
    a = np.asarray(arr)
    if a.ndim != 2:
        raise DimensionError(f"array must be 2D, got {a.ndim}D")
    if levels < 1:
        raise DimensionError(f"levels must be >= 1, got {levels}")
    div = 2 ** levels
    if a.shape[0] % div or a.shape[1] % div:
        raise DimensionError(
            f"sides {a.shape} must be divisible by 2**levels = {div}")
    return a


def haar_forward(arr: np.ndarray, levels: int = 3) -> np.ndarray:
    """Coefficient array of the same shape, low-pass block top-left."""
    a = _check(arr, levels)
    out = np.array(a, dtype=np.result_type(a.dtype, np.float64), copy=True)
    h, w = out.shape
    for _ in range(levels):
        block = _split(_split(out[:h, :w], 0), 1)
        out[:h, :w] = block
        h //= 2
        w //= 2
    return out


def haar_inverse(coeffs: np.ndarray, levels: int = 3) -> np.ndarray:
    """Exact inverse of :func:`haar_forward` with the same ``levels``."""
    c = _check(coeffs, levels)
    out = np.array(c, dtype=np.result_type(c.dtype, np.float64), copy=True)
    h = out.shape[0] >> (levels - 1)
    w = out.shape[1] >> (levels - 1)
    for _ in range(levels):
        out[:h, :w] = _merge(_merge(out[:h, :w], 1), 0)
        h *= 2
        w *= 2
    return out


def pad_to_multiple(arr: np.ndarray, multiple: int) -> np.ndarray:
    """Symmetric zero-pad so both sides become multiples of ``multiple``."""
    a = np.asarray(arr)
    pads = []
    for side in a.shape:
        target = -(-side // multiple) * multiple
        lead = (target - side) // 2
        pads.append((lead, target - side - lead))
    if all(lo == 0 and hi == 0 for lo, hi in pads):
        return a
    return np.pad(a, pads)


def crop_to_shape(arr: np.ndarray, shape) -> np.ndarray:
    """Undo :func:`pad_to_multiple` for an array padded from ``shape``."""
    slices = []
    for have, want in zip(arr.shape, shape):
        lead = (have - want) // 2
        slices.append(slice(lead, lead + want))
    return arr[tuple(slices)]
