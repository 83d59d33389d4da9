"""Motion-artifact simulation and bootstrap-aggregation correction for 2D k-space.

Transient motion during phase-encoded acquisition multiplies a sparse set
of k-space columns by per-line phase errors.  This package simulates those
errors, rejects them probabilistically through repeated random line
subsampling, reconstructs each subsample with a classical operator
(zero-filled or iterative soft-thresholding), and aggregates the branch
images into a corrected estimate.
"""

__version__ = "0.1.0"

from .aggregate import (AggregationConfig, AggregationResult, JensenReport,
                        MaskParams, bootstrap_correct, bootstrap_correct_kspace,
                        jensen_check)
from .errors import (BudgetError, DimensionError, FormatError, KbootError,
                     ParameterError)
from .fft import fft2c, forward, ifft2c, inverse, ky_coords
from .fileio import load_image, load_kspace, save_image, save_kspace
from .metrics import MetricReport, evaluate_pair, psnr, ssim
from .motion import (MotionTrace, apply_trace, periodic_trace,
                     random_rigid_trace, rigid_trace_from_deltas,
                     write_trace_csv)
from .phantom import EllipseSpec, rasterize_ellipses, shepp_logan, texture_phantom
from .recon import (IstaReconstructor, ZeroFilledReconstructor, ista_reconstruct,
                    ista_solve, make_reconstructor, soft_threshold, zero_filled)
from .sampling import (Direction, RejectionStats, SamplingMask, apply_mask,
                       gaussian_mask, rejection_stats, write_masks)
from .wavelet import crop_to_shape, haar_forward, haar_inverse, pad_to_multiple

__all__ = [
    "__version__",
    "AggregationConfig", "AggregationResult", "JensenReport", "MaskParams",
    "bootstrap_correct", "bootstrap_correct_kspace", "jensen_check",
    "BudgetError", "DimensionError", "FormatError", "KbootError", "ParameterError",
    "fft2c", "forward", "ifft2c", "inverse", "ky_coords",
    "load_image", "load_kspace", "save_image", "save_kspace",
    "MetricReport", "evaluate_pair", "psnr", "ssim",
    "MotionTrace", "apply_trace", "periodic_trace", "random_rigid_trace",
    "rigid_trace_from_deltas", "write_trace_csv",
    "EllipseSpec", "rasterize_ellipses", "shepp_logan", "texture_phantom",
    "IstaReconstructor", "ZeroFilledReconstructor", "ista_reconstruct",
    "ista_solve", "make_reconstructor", "soft_threshold", "zero_filled",
    "Direction", "RejectionStats", "SamplingMask", "apply_mask",
    "gaussian_mask", "rejection_stats", "write_masks",
    "crop_to_shape", "haar_forward", "haar_inverse", "pad_to_multiple",
]
