"""1D Gaussian random line-subsampling masks with a fully sampled center.

A mask keeps ``round(n_pe / accel)`` lines: the central ACS block is always
kept, and the remaining budget is drawn without replacement from the other
lines with probability proportional to a Gaussian profile centered on DC,
so low frequencies are sampled more densely than the periphery.

Masks normally select phase-encoding columns; ``Direction.FREQUENCY_ENCODE``
masks rows instead and exists only to show that read-out-direction
subsampling does not reject per-column phase outliers.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BudgetError, DimensionError, ParameterError
from .motion import MotionTrace

__all__ = [
    "Direction",
    "SamplingMask",
    "gaussian_mask",
    "apply_mask",
    "RejectionStats",
    "rejection_stats",
    "write_masks",
]


class Direction(str, Enum):
    PHASE_ENCODE = "pe"
    FREQUENCY_ENCODE = "fe"


@dataclass(frozen=True)
class SamplingMask:
    """Boolean keep-vector over k-space lines plus its generation metadata."""

    keep: np.ndarray
    accel: float
    acs_count: int
    direction: Direction = Direction.PHASE_ENCODE
    seed: int = 0

    @property
    def n_lines(self) -> int:
        return self.keep.shape[0]

    @property
    def n_kept(self) -> int:
        return int(self.keep.sum())

    @property
    def kept_indices(self) -> np.ndarray:
        return np.flatnonzero(self.keep)

    def axis(self) -> int:
        return 1 if self.direction == Direction.PHASE_ENCODE else 0

    def as_2d(self, shape) -> np.ndarray:
        """Broadcast the keep-vector over a 2D k-space of ``shape``."""
        ax = self.axis()
        if shape[ax] != self.n_lines:
            raise DimensionError(
                f"mask length {self.n_lines} does not match axis {ax} of shape {shape}")
        return self.keep[None, :] if ax == 1 else self.keep[:, None]


def gaussian_mask(n_pe: int, accel: float, acs_frac: float = 0.11,
                  sigma_frac: float = 0.25,
                  direction: Direction = Direction.PHASE_ENCODE,
                  seed: int = 0) -> SamplingMask:
    """Draw a Gaussian-density random mask over ``n_pe`` lines.

    ``round(acs_frac * n_pe)`` central lines (centered on the DC index
    ``n_pe // 2``) are always kept; the rest of the ``round(n_pe / accel)``
    budget is drawn without replacement with weight
    ``exp(-(i - center)^2 / (2 sigma^2))``, ``sigma = sigma_frac * n_pe``.

    The draw uses exponential race keys (one key per candidate line, divide
    by its weight, keep the smallest), which realizes exactly the same
    distribution as sequential weighted draws over the remaining lines while
    staying a single vectorized pass.  Deterministic given ``seed``.
    """
    if n_pe < 2:
        raise DimensionError(f"n_pe must be >= 2, got {n_pe}")
    if accel < 1:
        raise ParameterError(f"acceleration must be >= 1, got {accel}")
    if not 0.0 <= acs_frac <= 1.0:
        raise ParameterError(f"acs_frac must be in [0, 1], got {acs_frac}")
    if sigma_frac <= 0:
        raise ParameterError(f"sigma_frac must be > 0, got {sigma_frac}")
    if acs_frac * n_pe > n_pe / accel:
        raise BudgetError(
            f"ACS lines ({acs_frac * n_pe:.2f}) exceed the sampling budget "
            f"({n_pe / accel:.2f}) at acceleration {accel}")
    direction = Direction(direction)

    keep_count = int(round(n_pe / accel))
    acs_count = int(round(acs_frac * n_pe))
    center = n_pe // 2

    keep = np.zeros(n_pe, dtype=bool)
    acs_start = center - acs_count // 2
    keep[acs_start:acs_start + acs_count] = True

    n_draw = keep_count - acs_count
    if n_draw > 0:
        candidates = np.flatnonzero(~keep)
        sigma = sigma_frac * n_pe
        weights = np.exp(-((candidates - center) ** 2) / (2.0 * sigma * sigma))
        rng = np.random.Generator(np.random.Philox(key=seed))
        keys = rng.standard_exponential(candidates.shape[0]) / weights
        keep[candidates[np.argsort(keys, kind="stable")[:n_draw]]] = True

    return SamplingMask(keep=keep, accel=accel, acs_count=acs_count,
                        direction=direction, seed=seed)


def apply_mask(kspace: np.ndarray, mask: SamplingMask) -> np.ndarray:
    """Zero the dropped lines; kept lines are copied bit-identically."""
    k = np.asarray(kspace)
    if k.ndim != 2:
        raise DimensionError(f"kspace must be 2D, got {k.ndim}D")
    return np.where(mask.as_2d(k.shape), k, 0)


@dataclass(frozen=True)
class RejectionStats:
    """How many corrupted lines a mask keeps versus rejects."""

    corrupted_total: int
    corrupted_sampled: int
    fraction_removed: float


def rejection_stats(mask: SamplingMask, trace: MotionTrace) -> RejectionStats:
    """Fraction of the trace's corrupted lines that the mask drops.

    Defined as 1 when the trace corrupts nothing.
    """
    if mask.n_lines != trace.n_pe:
        raise DimensionError(
            f"mask length {mask.n_lines} does not match trace length {trace.n_pe}")
    total = int(trace.corrupted.size)
    sampled = int(mask.keep[trace.corrupted].sum())
    removed = 1.0 if total == 0 else 1.0 - sampled / total
    return RejectionStats(corrupted_total=total, corrupted_sampled=sampled,
                          fraction_removed=removed)


def write_masks(masks, path) -> None:
    """Write one line of 0/1 characters per mask."""
    with open(path, "w") as fh:
        for mask in masks:
            fh.write("".join("1" if kept else "0" for kept in mask.keep) + "\n")
