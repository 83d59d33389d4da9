"""Image and k-space file I/O.

Images are stored as 16-bit grayscale (PNG or binary PGM) with the scale
factor recorded in a ``<path>.meta`` sidecar as ``value_max=<decimal>``:
``stored = round(value / value_max * 65535)``.  Loading without the sidecar
assumes ``value_max = 1.0`` and warns.

K-space uses the little-endian "KSP1" container: 4-byte magic, u32 n_fe,
u32 n_pe, then ``n_fe * n_pe`` row-major interleaved float32 (re, im)
pairs.  Round trips are bit-exact at the format's 32-bit precision.

Concurrent reads are safe; concurrent writes to one path are undefined.
"""

import struct
import warnings
from pathlib import Path

import numpy as np
from PIL import Image as PilImage

from .errors import DimensionError, FormatError, ParameterError

__all__ = ["save_image", "load_image", "save_kspace", "load_kspace",
           "KSPACE_MAGIC"]

KSPACE_MAGIC = b"KSP1"
_DEPTH = 65535


def _quantize(image: np.ndarray):
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise DimensionError(f"image must be 2D, got {img.ndim}D")
    value_max = float(img.max())
    if value_max <= 0:
        value_max = 1.0
    stored = np.clip(np.round(img / value_max * _DEPTH), 0, _DEPTH).astype(np.uint16)
    return stored, value_max


def _write_sidecar(path: Path, value_max: float) -> None:
    path.with_name(path.name + ".meta").write_text(f"value_max={value_max:.12e}\n")


def save_image(image: np.ndarray, path, fmt: str = "png16") -> None:
    """Write a 16-bit grayscale file plus its ``.meta`` scale sidecar."""
    path = Path(path)
    stored, value_max = _quantize(image)
    if fmt == "png16":
        PilImage.fromarray(stored).save(path, format="PNG")
    elif fmt == "pgm16":
        header = f"P5\n{stored.shape[1]} {stored.shape[0]}\n{_DEPTH}\n".encode("ascii")
        path.write_bytes(header + stored.astype(">u2").tobytes())
    else:
        raise ParameterError(f"unknown image format {fmt!r}")
    _write_sidecar(path, value_max)


def _read_pgm(data: bytes, path) -> np.ndarray:
    # P5 header: magic, width, height, maxval, single whitespace, raster.
    fields = []
    pos = 2  # past "P5"
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":  # comment runs to end of line
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    pos += 1  # the single whitespace after maxval
    width, height, maxval = (int(f) for f in fields)
    if maxval != _DEPTH:
        raise FormatError(f"{path}: expected 16-bit PGM (maxval {_DEPTH}), got {maxval}")
    need = width * height * 2
    raster = data[pos:pos + need]
    if len(raster) < need:
        raise FormatError(f"{path}: truncated raster at byte {pos + len(raster)}")
    return np.frombuffer(raster, dtype=">u2").reshape(height, width).astype(np.uint16)


def load_image(path) -> np.ndarray:
    """Load a 16-bit grayscale file back to float using its sidecar scale."""
    path = Path(path)
    data = path.read_bytes()
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        stored = np.asarray(PilImage.open(path), dtype=np.uint16)
    elif data[:2] == b"P5":
        stored = _read_pgm(data, path)
    else:
        raise FormatError(f"{path}: unrecognized image magic at offset 0")
    meta = path.with_name(path.name + ".meta")
    if meta.exists():
        text = meta.read_text().strip()
        if not text.startswith("value_max="):
            raise FormatError(f"{meta}: expected value_max=<decimal>")
        value_max = float(text.split("=", 1)[1])
    else:
        warnings.warn(f"{meta} missing; assuming value_max=1.0")
        value_max = 1.0
    return stored.astype(np.float64) / _DEPTH * value_max


def save_kspace(kspace: np.ndarray, path) -> None:
    """Write a KSP1 container (float32 precision)."""
    k = np.asarray(kspace)
    if k.ndim != 2:
        raise DimensionError(f"kspace must be 2D, got {k.ndim}D")
    n_fe, n_pe = k.shape
    interleaved = np.empty((n_fe, n_pe, 2), dtype="<f4")
    interleaved[..., 0] = k.real
    interleaved[..., 1] = k.imag
    Path(path).write_bytes(KSPACE_MAGIC + struct.pack("<II", n_fe, n_pe)
                           + interleaved.tobytes())


def load_kspace(path) -> np.ndarray:
    """Read a KSP1 container; returns complex64 (the stored precision)."""
    data = Path(path).read_bytes()
    if data[:4] != KSPACE_MAGIC:
        raise FormatError(f"{path}: bad magic at offset 0, expected {KSPACE_MAGIC!r}")
    if len(data) < 12:
        raise FormatError(f"{path}: truncated header at byte {len(data)}")
    n_fe, n_pe = struct.unpack("<II", data[4:12])
    need = 12 + n_fe * n_pe * 8
    if len(data) < need:
        raise FormatError(f"{path}: truncated payload at byte {len(data)}, expected {need}")
    flat = np.frombuffer(data[12:need], dtype="<f4").reshape(n_fe, n_pe, 2)
    return (flat[..., 0] + 1j * flat[..., 1]).astype(np.complex64)
