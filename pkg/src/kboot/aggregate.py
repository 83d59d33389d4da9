"""Bootstrap subsampling and aggregation of per-branch reconstructions.

Phase outliers from motion are sparse along the phase-encoding axis, so a
random line subsample drops many of them.  Each of the ``n_branches``
branches subsamples the corrupted spectrum with its own seeded mask,
reconstructs an image, and the branch images are combined as a convex
weighted sum.  By Jensen's inequality the weighted-average estimate can
never have a larger squared error than the average of the branch errors;
:func:`jensen_check` verifies that bound on concrete data.

Aggregation operates on magnitude images after per-branch reconstruction,
and the summation runs in fixed branch order with compensated (Kahan)
accumulation so results are reproducible bit for bit regardless of how
many worker threads computed the branches.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import DimensionError, ParameterError
from .fft import forward
from .recon import IstaReconstructor
from .sampling import Direction, SamplingMask, apply_mask, gaussian_mask

__all__ = [
    "MaskParams",
    "AggregationConfig",
    "AggregationResult",
    "bootstrap_correct",
    "bootstrap_correct_kspace",
    "JensenReport",
    "jensen_check",
]

THREADS_ENV = "KBOOT_THREADS"


@dataclass(frozen=True)
class MaskParams:
    accel: float = 3.0
    acs_frac: float = 0.11
    sigma_frac: float = 0.25
    direction: Direction = Direction.PHASE_ENCODE


@dataclass(frozen=True)
class AggregationConfig:
    """Everything a correction run needs; fully explicit and hashable-ish."""

    n_branches: int = 15
    weights: Optional[np.ndarray] = None  # None means uniform 1/n_branches
    base_seed: int = 0
    mask_params: MaskParams = field(default_factory=MaskParams)
    recon: object = field(default_factory=IstaReconstructor)
    keep_branch_images: bool = False
    workers: int = 1


@dataclass
class AggregationResult:
    corrected: np.ndarray
    branch_images: Optional[List[np.ndarray]]
    branch_masks: List[SamplingMask]


def _checked_weights(weights, n: int) -> np.ndarray:
    if n < 1:
        raise ParameterError(f"need at least one branch, got {n}")
    if weights is None:
        return np.full(n, 1.0 / n)
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.shape[0] != n:
        raise ParameterError(f"expected {n} weights, got shape {w.shape}")
    if (w < 0).any():
        raise ParameterError("weights must be non-negative")
    if abs(float(w.sum()) - 1.0) > 1e-12:
        raise ParameterError(f"weights must sum to 1, got {w.sum()!r}")
    return w


def _weighted_sum(images: Sequence[np.ndarray], weights: np.ndarray) -> np.ndarray:
    """Kahan-compensated weighted sum in fixed order."""
    acc = np.zeros_like(np.asarray(images[0], dtype=np.float64))
    comp = np.zeros_like(acc)
    for w, img in zip(weights, images):
        term = w * np.asarray(img, dtype=np.float64) - comp
        total = acc + term
        comp = (total - acc) - term
        acc = total
    return acc


def bootstrap_correct_kspace(kspace: np.ndarray,
                             config: AggregationConfig) -> AggregationResult:
    """Correct a (possibly corrupted) spectrum by subsample / reconstruct / average."""
    k = np.asarray(kspace)
    if k.ndim != 2:
        raise DimensionError(f"kspace must be 2D, got {k.ndim}D")
    weights = _checked_weights(config.weights, config.n_branches)
    mp = config.mask_params
    n_lines = k.shape[1] if mp.direction == Direction.PHASE_ENCODE else k.shape[0]
    masks = [gaussian_mask(n_lines, mp.accel, acs_frac=mp.acs_frac,
                           sigma_frac=mp.sigma_frac, direction=mp.direction,
                           seed=config.base_seed + n)
             for n in range(1, config.n_branches + 1)]

    def run_branch(mask: SamplingMask) -> np.ndarray:
        return config.recon.reconstruct(apply_mask(k, mask), mask)

    workers = max(1, int(config.workers))
    if workers == 1 or config.n_branches == 1:
        branch_images = [run_branch(m) for m in masks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            branch_images = list(pool.map(run_branch, masks))

    corrected = _weighted_sum(branch_images, weights)
    return AggregationResult(
        corrected=corrected,
        branch_images=branch_images if config.keep_branch_images else None,
        branch_masks=masks)


def bootstrap_correct(image: np.ndarray,
                      config: AggregationConfig) -> AggregationResult:
    """Image-domain entry point: transform to k-space first, then correct."""
    return bootstrap_correct_kspace(forward(image), config)


def workers_from_env(default: int = 1) -> int:
    """Branch parallelism cap from the KBOOT_THREADS environment variable."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw)) if raw else max(1, default)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}")


@dataclass(frozen=True)
class JensenReport:
    lhs: float  # weighted mean of squared branch errors
    rhs: float  # squared error of the weighted mean
    holds: bool

    def csv_row(self) -> str:
        return f"{self.lhs!r},{self.rhs!r},{'true' if self.holds else 'false'}"


def jensen_check(x_star: np.ndarray, estimates: Sequence[np.ndarray],
                 weights) -> JensenReport:
    """Check that averaging estimates never increases the squared error.

    ``lhs = sum_n w_n ||x* - x_n||^2`` and ``rhs = ||x* - sum_n w_n x_n||^2``;
    ``holds`` allows a relative slack of ``1e-9 * lhs`` for rounding.
    """
    ref = np.asarray(x_star, dtype=np.float64)
    if not estimates:
        raise ParameterError("need at least one estimate")
    w = _checked_weights(weights, len(estimates))
    errors = []
    for est in estimates:
        e = np.asarray(est, dtype=np.float64)
        if e.shape != ref.shape:
            raise DimensionError(f"estimate shape {e.shape} != reference {ref.shape}")
        errors.append(float(np.sum((ref - e) ** 2)))
    lhs = math.fsum(wn * err for wn, err in zip(w, errors))
    aggregated = _weighted_sum(estimates, w)
    rhs = float(np.sum((ref - aggregated) ** 2))
    return JensenReport(lhs=lhs, rhs=rhs, holds=lhs >= rhs - 1e-9 * lhs)
