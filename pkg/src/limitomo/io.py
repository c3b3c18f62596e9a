"""Binary containers for rasters and sinograms.

Raster files ("raw-f32") carry a 16-byte header -- magic ``LTR1``, pixel
count ``n`` (uint32 LE), extent ``L`` (float32 LE), 4 reserved bytes --
followed by ``n*n`` row-major little-endian float32 samples.  Sinogram
files use magic ``LTS1`` and the header fields
``(n_phi: uint32, phi0: float64, dphi: float64, n_s: uint32,
s_max: float64)`` followed by ``n_phi*n_s`` row-major little-endian
float32 samples.  16-bit PGM output is for visual inspection only:
min-max normalized, big-endian samples, top row at largest ``y``; a
constant raster maps to all zeros.
"""

from __future__ import annotations

import math
import struct

import numpy as np

from .geometry import ImageGrid, Raster, SinogramGrid
from .transforms import Sinogram

RASTER_MAGIC = b"LTR1"
SINO_MAGIC = b"LTS1"
_RASTER_HEADER = struct.Struct("<4sIf4x")
_SINO_HEADER = struct.Struct("<4sIddId")

RASTER_FORMATS = ("raw-f32", "pgm16")


def write_raster(raster: Raster, path, fmt: str = "raw-f32") -> None:
    """Write a raster as raw-f32 (bit-exact) or pgm16 (for inspection)."""
    values = raster.values
    if not np.all(np.isfinite(values)):
        raise ValueError("raster contains non-finite values")
    if fmt == "raw-f32":
        header = _RASTER_HEADER.pack(RASTER_MAGIC, raster.grid.n,
                                     raster.grid.extent)
        data = values.astype("<f4").tobytes(order="C")
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(data)
        return
    if fmt == "pgm16":
        lo, hi = float(values.min()), float(values.max())
        if hi > lo:
            norm = (values - lo) / (hi - lo)
        else:
            norm = np.zeros_like(values)
        pix = np.round(norm * 65535.0).astype(">u2")
        n = raster.grid.n
        with open(path, "wb") as fh:
            fh.write(f"P5\n{n} {n}\n65535\n".encode("ascii"))
            fh.write(pix[::-1].tobytes(order="C"))  # top row = largest y
        return
    raise ValueError(f"unknown raster format {fmt!r}; expected one of {RASTER_FORMATS}")


def read_raster(path) -> Raster:
    """Read a raw-f32 raster file."""
    with open(path, "rb") as fh:
        header = fh.read(_RASTER_HEADER.size)
        if len(header) != _RASTER_HEADER.size:
            raise ValueError(f"{path}: truncated raster header")
        magic, n, extent = _RASTER_HEADER.unpack(header)
        if magic != RASTER_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {RASTER_MAGIC!r}")
        data = np.fromfile(fh, dtype="<f4", count=n * n)
    if data.size != n * n:
        raise ValueError(f"{path}: truncated raster payload")
    grid = ImageGrid(n, float(extent))
    return Raster(grid, data.reshape(n, n).astype(float))


def write_sinogram(sino: Sinogram, path) -> None:
    """Write a sinogram with its angular/offset geometry header."""
    if not np.all(np.isfinite(sino.values)):
        raise ValueError("sinogram contains non-finite values")
    g = sino.grid
    header = _SINO_HEADER.pack(SINO_MAGIC, g.n_phi, g.phi0, g.dphi,
                               g.n_s, g.s_max)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(sino.values.astype("<f4").tobytes(order="C"))


def read_sinogram(path) -> Sinogram:
    """Read a sinogram file, reconstructing its grid from the header.

    The angular range is taken as the full circle when
    ``n_phi * dphi == 2 pi`` (to float32-scale tolerance) and as the
    inclusive interval ``[phi0, phi0 + (n_phi - 1) dphi]`` otherwise.
    """
    with open(path, "rb") as fh:
        header = fh.read(_SINO_HEADER.size)
        if len(header) != _SINO_HEADER.size:
            raise ValueError(f"{path}: truncated sinogram header")
        magic, n_phi, phi0, dphi, n_s, s_max = _SINO_HEADER.unpack(header)
        if magic != SINO_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {SINO_MAGIC!r}")
        data = np.fromfile(fh, dtype="<f4", count=n_phi * n_s)
    if data.size != n_phi * n_s:
        raise ValueError(f"{path}: truncated sinogram payload")
    if abs(n_phi * dphi - 2.0 * math.pi) < 1e-6:
        grid = SinogramGrid(n_phi, n_s, s_max, phi0, phi0 + 2.0 * math.pi)
    else:
        grid = SinogramGrid(n_phi, n_s, s_max, phi0, phi0 + (n_phi - 1) * dphi)
    return Sinogram(grid, data.reshape(n_phi, n_s).astype(float))
