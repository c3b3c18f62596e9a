"""Row-wise 1-D filters in the offset variable and the composed operators.

The spectral filters act per sinogram row through a zero-padded FFT: the
row is extended to ``pad_factor * n_s`` samples, multiplied in frequency
by the requested symbol(s), inverted and cropped back.  With angular
frequency ``sigma`` the symbols are

- Hilbert transform (kernel ``1/(t - s)``): ``-i sign(sigma)``;
- ``d/ds``: ``i sigma``;
- ``-d^2/ds^2``: ``sigma^2``;
- ramp ``|sigma|``, the fused form of Hilbert then ``d/ds`` since
  ``(i sigma)(-i sign sigma) = |sigma|``.

Padding suppresses circular wrap-around of the nonlocal Hilbert kernel;
the operators are meant on the line, not the circle.  Finite-difference
variants of the derivatives are provided because spectral differentiation
rings on rows with square-root singularities (tangent lines of a disk).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import AngularWindow, ImageGrid, Raster
from .transforms import Sinogram, WeightFunction, backproject

FILTER_KINDS = ("hilbert", "d_ds", "neg_d2_ds2", "ramp")
FILTER_IMPLS = ("spectral", "finite-difference")


def _multiplier(kind: str, sigma: np.ndarray) -> np.ndarray:
    if kind == "hilbert":
        return -1j * np.sign(sigma)
    if kind == "d_ds":
        return 1j * sigma
    if kind == "neg_d2_ds2":
        return sigma.astype(complex) ** 2
    if kind == "ramp":
        return np.abs(sigma).astype(complex)
    raise ValueError(f"unknown filter kind {kind!r}; expected one of {FILTER_KINDS}")


def filter_chain(g: Sinogram, kinds, pad_factor: int = 2,
                 apodize: bool = False) -> Sinogram:
    """Apply a chain of spectral symbols in a single padded transform.

    Successive symbols multiply the same padded spectrum, so a chain is
    equal (to rounding) to the single fused symbol given by their product.
    """
    if pad_factor < 2:
        raise ValueError("pad_factor must be at least 2")
    kinds = (kinds,) if isinstance(kinds, str) else tuple(kinds)
    n_s = g.grid.n_s
    M = pad_factor * n_s
    sigma = 2.0 * math.pi * np.fft.fftfreq(M, d=g.grid.ds)
    spec = np.fft.fft(g.values, n=M, axis=1)
    for kind in kinds:
        spec *= _multiplier(kind, sigma)
    if apodize:
        spec *= 0.5 * (1.0 + np.cos(math.pi * sigma / np.max(np.abs(sigma))))
    out = np.fft.ifft(spec, axis=1).real[:, :n_s]
    return Sinogram(g.grid, out)


def hilbert(g: Sinogram, pad_factor: int = 2) -> Sinogram:
    """Row-wise Hilbert transform with the ``1/(t - s)`` kernel convention.

    With this convention ``H(cos(w .)) = sin(w .)`` and ``H o H = -Id``.
    """
    return filter_chain(g, "hilbert", pad_factor)


def d_ds(g: Sinogram, impl: str = "spectral", pad_factor: int = 2) -> Sinogram:
    """Row-wise derivative in ``s``.

    The finite-difference form is the central stencil
    ``(g[j+1] - g[j-1]) / (2 ds)`` with one-sided differences at the ends;
    it is exact on polynomials of degree <= 2 in the interior.
    """
    if impl == "spectral":
        return filter_chain(g, "d_ds", pad_factor)
    if impl != "finite-difference":
        raise ValueError(f"unknown filter impl {impl!r}; expected one of {FILTER_IMPLS}")
    v = g.values
    ds = g.grid.ds
    out = np.empty_like(v)
    out[:, 1:-1] = (v[:, 2:] - v[:, :-2]) / (2.0 * ds)
    out[:, 0] = (v[:, 1] - v[:, 0]) / ds
    out[:, -1] = (v[:, -1] - v[:, -2]) / ds
    return Sinogram(g.grid, out)


def neg_d2_ds2(g: Sinogram, impl: str = "spectral", pad_factor: int = 2) -> Sinogram:
    """Row-wise ``-d^2/ds^2``.

    The finite-difference form is ``-(g[j+1] - 2 g[j] + g[j-1]) / ds^2``
    with the stencil shifted one sample inward at the ends (still exact on
    quadratics).
    """
    if impl == "spectral":
        return filter_chain(g, "neg_d2_ds2", pad_factor)
    if impl != "finite-difference":
        raise ValueError(f"unknown filter impl {impl!r}; expected one of {FILTER_IMPLS}")
    v = g.values
    ds2 = g.grid.ds ** 2
    out = np.empty_like(v)
    out[:, 1:-1] = -(v[:, 2:] - 2.0 * v[:, 1:-1] + v[:, :-2]) / ds2
    out[:, 0] = -(v[:, 2] - 2.0 * v[:, 1] + v[:, 0]) / ds2
    out[:, -1] = -(v[:, -1] - 2.0 * v[:, -2] + v[:, -3]) / ds2
    return Sinogram(g.grid, out)


@dataclass(frozen=True, eq=False)
class ReconstructionConfig:
    """Selection of reconstruction operator and its ingredients.

    ``operator="B"`` composes back-projection with the Hilbert-derivative
    filter (order 0, exact inversion for full data and unit weights);
    ``operator="Lambda"`` uses ``-d^2/ds^2`` (order 1, emphasizes
    singularities).  ``window=None`` means full angular data with no
    cutoff.
    """

    operator: str
    mu: WeightFunction
    nu: WeightFunction
    window: AngularWindow | None = None
    filter_impl: str = "spectral"
    pad_factor: int = 2
    apodize: bool = False

    def __post_init__(self):
        if self.operator not in ("B", "Lambda"):
            raise ValueError("operator must be 'B' or 'Lambda'")
        if self.filter_impl not in FILTER_IMPLS:
            raise ValueError(f"filter_impl must be one of {FILTER_IMPLS}")
        if int(self.pad_factor) != self.pad_factor or self.pad_factor < 2:
            raise ValueError("pad_factor must be an integer >= 2")
        object.__setattr__(self, "pad_factor", int(self.pad_factor))

    @property
    def order(self) -> int:
        """Operator order: 0 for B, 1 for Lambda."""
        return 0 if self.operator == "B" else 1

    def with_window(self, window: AngularWindow | None) -> "ReconstructionConfig":
        return replace(self, window=window)


def apply_operator_filter(g: Sinogram, cfg: ReconstructionConfig) -> Sinogram:
    """The row filter of the selected operator, before back-projection."""
    if cfg.operator == "B":
        if cfg.filter_impl == "spectral":
            return filter_chain(g, "ramp", cfg.pad_factor, cfg.apodize)
        # Hilbert is nonlocal and has no stencil form; only the derivative
        # switches to finite differences.
        return hilbert(d_ds(g, "finite-difference"), cfg.pad_factor)
    if cfg.filter_impl == "spectral":
        return filter_chain(g, "neg_d2_ds2", cfg.pad_factor, cfg.apodize)
    return neg_d2_ds2(g, "finite-difference")


def reconstruct(g: Sinogram, cfg: ReconstructionConfig, igrid: ImageGrid) -> Raster:
    """Filtered back-projection reconstruction of a sinogram.

    Applies the operator's row filter, back-projects with the weight
    ``nu`` and the window cutoff, and scales by ``1/(4 pi)``.  The
    sinogram must have been produced with weight ``cfg.mu`` over an
    angular range covering the window.
    """
    if cfg.window is not None:
        lo, hi = g.grid.phi0, g.grid.phi1
        if cfg.window.phi1 < lo - 1e-12 or cfg.window.phi2 > hi + 1e-12:
            raise ValueError("sinogram angular range does not cover the window")
    filt = apply_operator_filter(g, cfg)
    img = backproject(filt, cfg.nu, cfg.window, igrid)
    return Raster(igrid, img.values / (4.0 * math.pi))
