"""Per-line phase-error traces that model transient rigid and breathing motion.

A transient displacement of ``d`` pixels while phase-encode line ``k_y`` is
acquired multiplies that k-space column by ``exp(-1j * k_y * d)``.  A trace
records the displacement ``delta`` (pixels) and the resulting phase error
``phi = k_y * delta`` (radians) for every column, plus the set of corrupted
columns.  Lines with ``|k_y| <= k0`` are never corrupted: the scanner fills
the k-space center first, before the motion starts.

Two generators are provided:

* :func:`random_rigid_trace` draws an independent displacement per line,
* :func:`periodic_trace` uses one sinusoidal displacement waveform
  ``delta * sin(alpha * k_y + beta)``, the breathing-motion model.

Displacements are expressed in pixels; converting physical units is the
caller's business.
"""

import csv
import math
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .errors import DimensionError, ParameterError
from .fft import ky_coords

__all__ = [
    "K0_DEFAULT",
    "DELTA_MAX_DEFAULT",
    "ALPHA_RANGE",
    "BETA_RANGE",
    "DELTA_RANGE",
    "MotionTrace",
    "rigid_trace_from_deltas",
    "random_rigid_trace",
    "periodic_trace",
    "apply_trace",
    "write_trace_csv",
]

K0_DEFAULT = math.pi / 10
DELTA_MAX_DEFAULT = 37.0
# Sinusoidal-waveform constants: rate, phase offset, amplitude (pixels).
ALPHA_RANGE = (0.1, 5.0)
BETA_RANGE = (0.0, math.pi / 4)
DELTA_RANGE = (0.0, 37.0)


@dataclass(frozen=True)
class MotionTrace:
    """Phase-error trace over the phase-encoding columns.

    Attributes
    ----------
    phi : (n_pe,) float array, phase error in radians per column.
    delta : (n_pe,) float array, displacement in pixels per column.
    corrupted : sorted int array of column indices where ``phi != 0``.
    params : generator kind, cutoff, seed and constants used to build it.
    """

    phi: np.ndarray
    delta: np.ndarray
    corrupted: np.ndarray
    params: Mapping = field(default_factory=dict)

    @property
    def n_pe(self) -> int:
        return self.phi.shape[0]

    @property
    def corrupted_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_pe, dtype=bool)
        mask[self.corrupted] = True
        return mask

    def negated(self) -> "MotionTrace":
        """Trace with the opposite phase; applying both restores the input."""
        return MotionTrace(-self.phi, -self.delta, self.corrupted,
                           dict(self.params, negated=True))


def _rng(seed: int) -> np.random.Generator:
    # Counter-based generator: draw order is reproducible by construction.
    return np.random.Generator(np.random.Philox(key=seed))


def _eligible(n_pe: int, k0: float) -> np.ndarray:
    if not 0.0 <= k0 <= math.pi:
        raise ParameterError(f"k0 must be in [0, pi], got {k0}")
    return np.abs(ky_coords(n_pe)) > k0


def _build(deltas: np.ndarray, k0: float, params: dict) -> MotionTrace:
    ky = ky_coords(deltas.shape[0])
    delta = np.where(np.abs(ky) > k0, deltas, 0.0)
    phi = ky * delta
    corrupted = np.flatnonzero(phi != 0.0)
    return MotionTrace(phi=phi, delta=delta, corrupted=corrupted, params=params)


def rigid_trace_from_deltas(deltas, k0: float = 0.0) -> MotionTrace:
    """Trace from explicit per-line displacements (pixels).

    ``phi = k_y * delta`` on lines with ``|k_y| > k0``; zero elsewhere.
    A constant integer vector realizes a pure circular shift of the image.
    """
    d = np.asarray(deltas, dtype=np.float64)
    if d.ndim != 1 or d.shape[0] < 2:
        raise DimensionError(f"deltas must be 1D with length >= 2, got shape {d.shape}")
    _eligible(d.shape[0], k0)  # validates k0
    return _build(d, k0, {"kind": "explicit", "k0": k0})


def random_rigid_trace(n_pe: int, k0: float = K0_DEFAULT,
                       delta_max: float = DELTA_MAX_DEFAULT,
                       seed: int = 0) -> MotionTrace:
    """Independent uniform displacement per line, the rigid-motion model.

    Each column with ``|k_y| > k0`` gets ``delta`` drawn uniformly from
    ``(-delta_max, delta_max)``, one draw per column in ascending order.
    Deterministic given ``seed``.
    """
    if n_pe < 2:
        raise DimensionError(f"n_pe must be >= 2, got {n_pe}")
    if delta_max < 0:
        raise ParameterError(f"delta_max must be >= 0, got {delta_max}")
    elig = _eligible(n_pe, k0)
    deltas = np.zeros(n_pe)
    deltas[elig] = _rng(seed).uniform(-delta_max, delta_max, size=int(elig.sum()))
    return _build(deltas, k0, {"kind": "rigid", "k0": k0,
                               "delta_max": delta_max, "seed": seed})


def _resolve(name: str, value, lo: float, hi: float,
             rng: np.random.Generator, override: bool) -> float:
    if isinstance(value, str):
        if value != "random":
            raise ParameterError(f"{name} must be a number or 'random', got {value!r}")
        return float(rng.uniform(lo, hi))
    v = float(value)
    # Boundary values are accepted; only values beyond the documented range
    # need the override flag (the random draw itself stays inside the range).
    if not override and not lo <= v <= hi:
        raise ParameterError(
            f"{name}={v} outside [{lo}, {hi}]; pass allow_out_of_range=True to force")
    return v


def periodic_trace(n_pe: int, k0: float = K0_DEFAULT,
                   alpha: Union[float, str] = "random",
                   beta: Union[float, str] = "random",
                   delta: Union[float, str] = "random",
                   seed: int = 0,
                   allow_out_of_range: bool = False) -> MotionTrace:
    """Sinusoidal displacement waveform, the breathing-motion model.

    ``phi = k_y * delta * sin(alpha*k_y + beta)`` on lines with
    ``|k_y| > k0``; zero elsewhere.  Any of ``alpha``, ``beta``, ``delta``
    may be the string ``"random"``, in which case it is drawn uniformly from
    its documented range using ``seed`` (draw order: alpha, beta, delta).
    """
    if n_pe < 2:
        raise DimensionError(f"n_pe must be >= 2, got {n_pe}")
    rng = _rng(seed)
    a = _resolve("alpha", alpha, *ALPHA_RANGE, rng=rng, override=allow_out_of_range)
    b = _resolve("beta", beta, *BETA_RANGE, rng=rng, override=allow_out_of_range)
    d = _resolve("delta", delta, *DELTA_RANGE, rng=rng, override=allow_out_of_range)
    _eligible(n_pe, k0)  # validates k0
    ky = ky_coords(n_pe)
    deltas = d * np.sin(a * ky + b)
    return _build(deltas, k0, {"kind": "periodic", "k0": k0, "alpha": a,
                               "beta": b, "delta": d, "seed": seed})


def apply_trace(kspace: np.ndarray, trace: MotionTrace) -> np.ndarray:
    """Multiply each corrupted column by ``exp(-1j * phi)``.

    Columns outside the corrupted set are copied bit-identically.  The
    per-sample magnitude is preserved, and a positive constant displacement
    ``d`` shifts the image by ``+d`` pixels along the phase-encode axis.
    """
    k = np.asarray(kspace)
    if k.ndim != 2:
        raise DimensionError(f"kspace must be 2D, got {k.ndim}D")
    if k.shape[1] != trace.n_pe:
        raise DimensionError(
            f"trace length {trace.n_pe} does not match n_pe {k.shape[1]}")
    out = np.array(k, dtype=np.result_type(k.dtype, np.complex128), copy=True)
    cols = trace.corrupted
    if cols.size:
        out[:, cols] *= np.exp(-1j * trace.phi[cols])[None, :]
    return out


def write_trace_csv(trace: MotionTrace, path) -> None:
    """Dump the trace as ``index,k_y,delta,phi`` rows for inspection."""
    ky = ky_coords(trace.n_pe)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "k_y", "delta", "phi"])
        for i in range(trace.n_pe):
            writer.writerow([i, repr(float(ky[i])),
                             repr(float(trace.delta[i])), repr(float(trace.phi[i]))])
