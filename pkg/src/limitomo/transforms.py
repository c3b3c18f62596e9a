"""Discrete weighted X-ray transform and weighted back-projection.

The forward transform evaluates ``g(phi, s) = integral over {x.theta = s}
of mu(x, theta) f(x)``; the back-projection evaluates
``integral over the angular range of kappa(phi) nu(x, phi) g(phi, x.theta)``.
Both are plain quadrature rules: trapezoid along lines (step ``h/2``,
bilinear image interpolation) for the forward operator, trapezoid (or
uniform-periodic) in ``phi`` with linear interpolation in ``s`` for the
back-projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from ._util import accumulate_chunks, map_chunks
from .geometry import AngularWindow, ImageGrid, Raster, SinogramGrid
from .phantoms import Phantom, analytic_sinogram_row


class WeightFunction:
    """Strictly positive smooth weight ``w(x, phi)`` on image x direction.

    Instances are callable: ``w(x, phi)`` with ``x`` of shape ``(..., 2)``
    and ``phi`` a scalar or array broadcastable against ``x[..., 0]``.
    """

    def __init__(self, fn, kind: str = "custom", params: tuple = ()):
        self._fn = fn
        self.kind = kind
        self.params = params

    def __call__(self, x, phi):
        return self._fn(np.asarray(x, dtype=float), phi)

    def __repr__(self):
        args = " ".join(repr(p) for p in self.params)
        return f"WeightFunction({self.kind}{' ' + args if args else ''})"

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    @classmethod
    def constant(cls, c: float) -> "WeightFunction":
        if not (c > 0):
            raise ValueError("constant weight must be positive")
        c = float(c)

        def fn(x, phi):
            shape = np.broadcast_shapes(x[..., 0].shape, np.shape(phi))
            return np.full(shape, c)

        return cls(fn, "constant", (c,))

    @classmethod
    def exponential(cls, lam: float, mode: str = "perp") -> "WeightFunction":
        """Weight ``exp(lam * x . theta_perp)`` (or ``x . theta`` for ``mode="parallel"``)."""
        if mode not in ("perp", "parallel"):
            raise ValueError("exponential weight mode must be 'perp' or 'parallel'")
        lam = float(lam)

        def fn(x, phi):
            c, s = np.cos(phi), np.sin(phi)
            if mode == "perp":
                proj = -x[..., 0] * s + x[..., 1] * c
            else:
                proj = x[..., 0] * c + x[..., 1] * s
            return np.exp(lam * proj)

        return cls(fn, "exponential", (lam, mode))

    @classmethod
    def tabulated(cls, phis: np.ndarray, axis: np.ndarray,
                  table: np.ndarray) -> "WeightFunction":
        """Tabulated weight: bilinear in ``x``, linear in ``phi``.

        ``table[p, j, i]`` holds the value at ``phi = phis[p]``,
        ``y = axis[j]``, ``x = axis[i]`` with uniformly spaced ``phis``.
        Angles wrap periodically over the tabulated range; spatial queries
        are clamped to the table edge.
        """
        phis = np.asarray(phis, dtype=float)
        axis = np.asarray(axis, dtype=float)
        table = np.asarray(table, dtype=float)
        if table.shape != (phis.size, axis.size, axis.size):
            raise ValueError("table shape must be (n_phi, n_axis, n_axis)")
        if np.any(table <= 0):
            raise ValueError("tabulated weight must be strictly positive")
        dps = np.diff(phis)
        if phis.size < 2 or not np.allclose(dps, dps[0]):
            raise ValueError("tabulated weight requires a uniform phi grid")
        ext = np.concatenate([table, table[:1]], axis=0)  # wrap row in phi
        x0, dx = axis[0], axis[1] - axis[0]
        p0, dp = phis[0], dps[0]
        n_p = phis.size

        def fn(x, phi):
            xi = np.clip((x[..., 0] - x0) / dx, 0, axis.size - 1)
            yi = np.clip((x[..., 1] - x0) / dx, 0, axis.size - 1)
            pf = np.mod((np.asarray(phi, dtype=float) - p0) / dp, n_p)
            shape = np.broadcast_shapes(xi.shape, pf.shape)
            coords = [np.broadcast_to(pf, shape).ravel(),
                      np.broadcast_to(yi, shape).ravel(),
                      np.broadcast_to(xi, shape).ravel()]
            out = map_coordinates(ext, coords, order=1, mode="nearest")
            return out.reshape(shape) if shape else float(out[0])

        return cls(fn, "tabulated", (phis, axis, table))


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Samples of ``g(phi, s)`` on a :class:`SinogramGrid` (``n_phi x n_s``)."""

    grid: SinogramGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_phi, self.grid.n_s):
            raise ValueError(
                f"sinogram shape {v.shape} does not match grid "
                f"({self.grid.n_phi}, {self.grid.n_s})"
            )
        object.__setattr__(self, "values", v)


def _forward_raster(raster: Raster, mu: WeightFunction, sgrid: SinogramGrid) -> np.ndarray:
    grid = raster.grid
    L, h = grid.extent, grid.h
    if sgrid.s_max < math.sqrt(2.0) * L - 1e-12:
        raise ValueError("s_max too small: raster support requires s_max >= sqrt(2) * extent")
    dt = 0.5 * h
    half_t = int(math.ceil(math.sqrt(2.0) * L / dt))
    t = (np.arange(2 * half_t + 1) - half_t) * dt
    s = sgrid.s_values()
    phis = sgrid.phis()
    img = raster.values
    const = mu.params[0] if mu.is_constant else None

    def worker(sl: slice) -> np.ndarray:
        out = np.zeros((sl.stop - sl.start, sgrid.n_s))
        for row, i in enumerate(range(sl.start, sl.stop)):
            c, sn = math.cos(phis[i]), math.sin(phis[i])
            xs = s[:, None] * c + t[None, :] * (-sn)
            ys = s[:, None] * sn + t[None, :] * c
            cols = (xs + L) / h - 0.5
            rows = (ys + L) / h - 0.5
            f = map_coordinates(img, [rows, cols], order=1, mode="constant", cval=0.0)
            if const is not None:
                f *= const
            else:
                pts = np.stack([xs, ys], axis=-1)
                f = f * mu(pts, phis[i])
            acc = f.sum(axis=1) - 0.5 * (f[:, 0] + f[:, -1])
            out[row] = acc * dt
        return out

    return np.concatenate(map_chunks(worker, sgrid.n_phi), axis=0)


def forward(source: Phantom | Raster, mu: WeightFunction,
            sgrid: SinogramGrid) -> Sinogram:
    """Weighted X-ray transform of a phantom or raster.

    Phantom sources use the analytic line integral per sample (the oracle
    path); raster sources use trapezoid quadrature along each line with
    step ``h/2`` and bilinear interpolation, the weight evaluated at the
    quadrature nodes.
    """
    if isinstance(source, Phantom):
        if sgrid.s_max < source.support_radius() - 1e-12:
            raise ValueError("s_max too small: sinogram does not cover the phantom support")
        s = sgrid.s_values()
        phis = sgrid.phis()
        values = np.zeros((sgrid.n_phi, sgrid.n_s))
        for i, phi in enumerate(phis):
            values[i] = analytic_sinogram_row(source, mu, float(phi), s)
        return Sinogram(sgrid, values)
    if isinstance(source, Raster):
        return Sinogram(sgrid, _forward_raster(source, mu, sgrid))
    raise TypeError("source must be a Phantom or a Raster")


def backproject(g: Sinogram, nu: WeightFunction,
                window: AngularWindow | None, igrid: ImageGrid,
                double_half_range: bool = False) -> Raster:
    """Weighted, cutoff-modulated back-projection onto an image grid.

    For each pixel ``x`` this accumulates
    ``sum_phi w_phi kappa(phi) nu(x, phi) g(phi, x . theta(phi))`` with
    linear interpolation in ``s``; ``window=None`` means ``kappa == 1``
    over the sinogram's angular range.  When the sinogram covers only a
    half range and the integrand is even, ``double_half_range=True``
    doubles the result to account for the antipodal identification
    (off by default).
    """
    if not np.all(np.isfinite(g.values)):
        raise ValueError("sinogram contains non-finite values")
    if igrid.pixel_radius > g.grid.s_max + 1e-12:
        raise ValueError(
            "image grid has pixels with |x . theta| > s_max; increase s_max"
        )
    phis = g.grid.phis()
    wphi = g.grid.phi_weights()
    kap = np.ones(g.grid.n_phi) if window is None else window.kappa(phis)
    s = g.grid.s_values()
    X, Y = igrid.centers()
    xf, yf = X.ravel(), Y.ravel()
    pts = np.stack([xf, yf], axis=-1)
    nu_const = nu.params[0] if nu.is_constant else None
    active = np.nonzero(kap * wphi != 0.0)[0]

    def worker(sl: slice) -> np.ndarray:
        acc = np.zeros(xf.size)
        for i in active[sl]:
            c, sn = math.cos(phis[i]), math.sin(phis[i])
            sv = xf * c + yf * sn
            gi = np.interp(sv, s, g.values[i])
            w = kap[i] * wphi[i]
            if nu_const is not None:
                acc += (w * nu_const) * gi
            else:
                acc += w * gi * nu(pts, phis[i])
        return acc

    acc = accumulate_chunks(worker, active.size)
    if double_half_range:
        acc = 2.0 * acc
    return Raster(igrid, acc.reshape(igrid.n, igrid.n))
