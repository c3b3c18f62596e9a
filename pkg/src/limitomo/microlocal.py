"""Symbols, artifact-line prediction, wavefront probing and order studies.

This is the measurement layer for limited-angle streaks: the principal
symbol of the reconstruction operators, the geometric prediction of the
artifact lines generated by edge singularities (boundary points whose
normal matches a window boundary direction), a windowed-Fourier decay
probe acting as a computable wavefront-set proxy, and the study that
tracks artifact strength against the cutoff's vanishing order.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import map_coordinates
from scipy.spatial import cKDTree

from .filters import ReconstructionConfig, reconstruct
from .geometry import AngularWindow, ImageGrid, Raster, SinogramGrid
from .phantoms import EdgeSingularity, Phantom, edge_singularities
from .transforms import forward

NO_SIGNAL = float("nan")


def _direction_angle(xi) -> float:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (2,):
        raise ValueError("frequency vector must have shape (2,)")
    if xi[0] == 0.0 and xi[1] == 0.0:
        raise ValueError("frequency vector must be nonzero")
    return math.atan2(xi[1], xi[0]) % (2.0 * math.pi)


def symbol_eval(cfg: ReconstructionConfig, x, xi) -> float:
    """Principal symbol of the configured operator at ``(x, xi)``.

    Evaluates
    ``0.5 [kappa(xi/|xi|) nu(x, xi) mu(x, xi)
          + kappa(-xi/|xi|) nu(x, -xi) mu(x, -xi)]``
    with the weights extended zero-homogeneously in ``xi`` (evaluated at
    the direction angle); the Lambda symbol carries an extra ``|xi|``.
    """
    x = np.asarray(x, dtype=float)
    psi = _direction_angle(xi)
    psi_op = (psi + math.pi) % (2.0 * math.pi)
    if cfg.window is None:
        k1 = k2 = 1.0
    else:
        k1 = float(cfg.window.kappa(psi))
        k2 = float(cfg.window.kappa(psi_op))
    val = 0.5 * (k1 * float(cfg.nu(x, psi)) * float(cfg.mu(x, psi))
                 + k2 * float(cfg.nu(x, psi_op)) * float(cfg.mu(x, psi_op)))
    if cfg.operator == "Lambda":
        xi = np.asarray(xi, dtype=float)
        val = math.hypot(xi[0], xi[1]) * val
    return val


@dataclass(frozen=True, eq=False)
class ArtifactLine:
    """Predicted streak line through an edge singularity.

    The line passes through the generator's base point with direction
    orthogonal to the window boundary direction ``e_j`` (so ``e_j`` is its
    unit normal).
    """

    generator: EdgeSingularity
    j: int
    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", np.asarray(self.point, dtype=float))
        object.__setattr__(self, "direction", np.asarray(self.direction, dtype=float))

    @property
    def normal(self) -> np.ndarray:
        d = self.direction
        return np.array([d[1], -d[0]])

    def distance(self, pts) -> np.ndarray:
        """Unsigned distances from point(s) of shape ``(..., 2)`` to the line."""
        pts = np.asarray(pts, dtype=float)
        n = self.normal
        return np.abs((pts[..., 0] - self.point[0]) * n[0]
                      + (pts[..., 1] - self.point[1]) * n[1])


def predicted_artifact_lines(phantom: Phantom, window: AngularWindow,
                             tol: float = 1e-9) -> list[ArtifactLine]:
    """Streak lines generated by the phantom's edge singularities."""
    lines = []
    for gen in edge_singularities(phantom, window, tol):
        e = window.boundary_direction(gen.j)
        direction = np.array([-e[1], e[0]])
        lines.append(ArtifactLine(gen, gen.j, gen.point, direction))
    return lines


@dataclass(frozen=True, eq=False)
class WavefrontProbe:
    """Local directional frequency-decay measurement setup.

    ``scales`` are frequency magnitudes in cycles per image extent
    (DFT mode units), strictly increasing with at least two entries.
    """

    point: np.ndarray
    direction: np.ndarray
    window_radius: float
    scales: tuple[float, ...]

    def __post_init__(self):
        p = np.asarray(self.point, dtype=float)
        d = np.asarray(self.direction, dtype=float)
        nd = math.hypot(d[0], d[1])
        if nd == 0.0:
            raise ValueError("probe direction must be nonzero")
        sc = tuple(float(s) for s in self.scales)
        if len(sc) < 2:
            raise ValueError("probe needs at least 2 scales")
        if any(b <= a for a, b in zip(sc[:-1], sc[1:])):
            raise ValueError("probe scales must be strictly increasing")
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "direction", d / nd)
        object.__setattr__(self, "window_radius", float(self.window_radius))
        object.__setattr__(self, "scales", sc)


def default_probe_scales(n: int, count: int = 12) -> tuple[float, ...]:
    """Geometric scale ladder over [8, n/4] cycles per extent."""
    return tuple(np.geomspace(8.0, n / 4.0, count))


def wavefront_probe(img: Raster, probe: WavefrontProbe) -> float:
    """Directional smoothness exponent at a point of the image.

    Multiplies the image by a raised-cosine bump at the probe point, takes
    the 2-D DFT, samples its magnitude along the probe direction at the
    listed scales, and returns the least-squares slope of ``log |F|``
    against ``log |xi|`` (more negative means smoother).  Returns NaN
    ("no signal") when every sampled magnitude is below 1e-12.
    """
    grid = img.grid
    n, L, h = grid.n, grid.extent, grid.h
    R = probe.window_radius
    if R < 4.0 * h:
        raise ValueError("probe window radius must be at least 4 pixels")
    px, py = probe.point
    if abs(px) + R > L or abs(py) + R > L:
        raise ValueError("probe window leaves the image grid")
    if probe.scales[-1] > n / 2 - 1:
        raise ValueError("probe scales exceed the grid Nyquist mode")
    X, Y = grid.centers()
    r = np.hypot(X - px, Y - py)
    bump = np.where(r <= R, 0.5 * (1.0 + np.cos(math.pi * np.minimum(r / R, 1.0))), 0.0)
    F = np.fft.fftshift(np.fft.fft2(img.values * bump))
    mag = np.abs(F)
    sc = np.asarray(probe.scales)
    mx = sc * probe.direction[0]
    my = sc * probe.direction[1]
    samples = map_coordinates(mag, [my + n // 2, mx + n // 2], order=1)
    if np.all(samples < 1e-12):
        return NO_SIGNAL
    logs = np.log(np.maximum(samples, 1e-300))
    slope = np.polyfit(np.log(sc), logs, 1)[0]
    return float(slope)


@dataclass(frozen=True, eq=False)
class ArtifactReport:
    """Measured artifact and edge strengths for one reconstruction."""

    lines: tuple[ArtifactLine, ...]
    per_line_strength: tuple[float, ...]
    edge_strengths: tuple[float, ...]
    k: int | None
    metadata: dict = field(default_factory=dict)

    @property
    def max_line_strength(self) -> float:
        return max(self.per_line_strength, default=0.0)

    @property
    def max_edge_strength(self) -> float:
        return max(self.edge_strengths, default=0.0)


def _sample_raster(raster: Raster, pts: np.ndarray) -> np.ndarray:
    grid = raster.grid
    cols = (pts[..., 0] + grid.extent) / grid.h - 0.5
    rows = (pts[..., 1] + grid.extent) / grid.h - 0.5
    return map_coordinates(raster.values, [rows, cols], order=1, mode="constant")


def artifact_report(recon: Raster, phantom: Phantom,
                    window: AngularWindow | None, exclusion_radius: float,
                    tube_radius: float | None = None,
                    metadata: dict | None = None) -> ArtifactReport:
    """Measure streak and edge strengths of a reconstruction.

    Each predicted artifact line is sampled at pixel resolution; points
    within ``exclusion_radius`` of the phantom boundary or of the line's
    generator are dropped and the peak absolute value of the rest is the
    line strength.  Edge strengths are peak absolute values in a tube
    (half-width ``tube_radius``, default 3 pixels) around the boundary
    arcs whose normals lie in the window; with ``window=None`` the whole
    boundary counts as visible.
    """
    grid = recon.grid
    h, L = grid.h, grid.extent
    if exclusion_radius < 2.0 * h:
        raise ValueError("exclusion radius must be at least 2 pixels")
    if tube_radius is None:
        tube_radius = 3.0 * h

    bpts, bnrm, _, bidx = phantom.boundary_cloud()
    tree = cKDTree(bpts) if len(bpts) else None

    lines = predicted_artifact_lines(phantom, window) if window is not None else []
    t = np.arange(-math.sqrt(2.0) * L, math.sqrt(2.0) * L + h, h)
    strengths = []
    for line in lines:
        pts = line.point + t[:, None] * line.direction
        inside = (np.abs(pts[:, 0]) <= L - h) & (np.abs(pts[:, 1]) <= L - h)
        pts = pts[inside]
        keep = np.hypot(pts[:, 0] - line.point[0], pts[:, 1] - line.point[1]) >= exclusion_radius
        if tree is not None:
            dist, _ = tree.query(pts)
            keep &= dist >= exclusion_radius
        vals = np.abs(_sample_raster(recon, pts[keep]))
        strengths.append(float(vals.max()) if vals.size else 0.0)

    # per-shape peak |recon| along the visible part of the boundary
    edge_strengths = []
    if len(bpts):
        psi = np.arctan2(bnrm[:, 1], bnrm[:, 0])
        visible = np.ones(len(bpts), dtype=bool) if window is None \
            else window.contains_direction(psi)
        offsets = np.arange(-tube_radius, tube_radius + 0.25 * h, 0.5 * h)
        for i in range(len(phantom.shapes)):
            sel = visible & (bidx == i)
            if not np.any(sel):
                edge_strengths.append(0.0)
                continue
            pts = bpts[sel][:, None, :] + offsets[None, :, None] * bnrm[sel][:, None, :]
            inb = (np.abs(pts[..., 0]) <= L - h) & (np.abs(pts[..., 1]) <= L - h)
            vals = np.abs(_sample_raster(recon, pts))
            vals[~inb] = 0.0
            edge_strengths.append(float(vals.max()))

    k = window.k if window is not None and window.kind == "finite-order" else None
    meta = {
        "n": grid.n,
        "extent": grid.extent,
        "exclusion_radius": float(exclusion_radius),
        "tube_radius": float(tube_radius),
    }
    if metadata:
        meta.update(metadata)
    return ArtifactReport(tuple(lines), tuple(strengths), tuple(edge_strengths), k, meta)


@dataclass(frozen=True)
class StudyRow:
    """One line of the strength-versus-order table."""

    k: int
    line_strength: float
    edge_strength: float
    ratio: float


def strength_vs_order_study(phantom: Phantom, base_cfg: ReconstructionConfig,
                            k_list, igrid: ImageGrid, sgrid: SinogramGrid,
                            exclusion_radius: float | None = None,
                            report_dir=None) -> list[StudyRow]:
    """Run the full pipeline per cutoff order and tabulate strength ratios.

    The same sinogram (computed once with ``base_cfg.mu``) is reconstructed
    with finite-order cutoffs of order ``k`` on identical grids; each run is
    measured with :func:`artifact_report` and summarized as
    ``(k, max line strength, max edge strength, ratio)``.  When
    ``report_dir`` is given, per-k CSV reports and a JSON summary are
    written there.
    """
    ks = [int(k) for k in k_list]
    if not ks:
        raise ValueError("k_list must be nonempty")
    if any(b <= a for a, b in zip(ks[:-1], ks[1:])):
        raise ValueError("k_list must be strictly increasing")
    if base_cfg.window is None:
        raise ValueError("strength study requires a windowed configuration")
    if exclusion_radius is None:
        exclusion_radius = 4.0 * igrid.h

    sino = forward(phantom, base_cfg.mu, sgrid)
    rows: list[StudyRow] = []
    reports: list[ArtifactReport] = []
    for k in ks:
        win = AngularWindow(base_cfg.window.phi1, base_cfg.window.phi2,
                            "finite-order", k)
        recon = reconstruct(sino, base_cfg.with_window(win), igrid)
        rep = artifact_report(recon, phantom, win, exclusion_radius)
        reports.append(rep)
        edge = rep.max_edge_strength
        line = rep.max_line_strength
        ratio = line / edge if edge > 0 else math.inf
        rows.append(StudyRow(k, line, edge, ratio))

    if report_dir is not None:
        from pathlib import Path

        out = Path(report_dir)
        out.mkdir(parents=True, exist_ok=True)
        for k, rep in zip(ks, reports):
            write_report_csv(rep, out / f"report_k{k}.csv")
        write_study_summary(rows, out / "summary.json")
    return rows


def write_report_csv(report: ArtifactReport, path) -> None:
    """Write one artifact report as CSV.

    Columns: k, line_id, generator_x, generator_y, j, strength,
    edge_strength, ratio.
    """
    edge = report.max_edge_strength
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "line_id", "generator_x", "generator_y", "j",
                    "strength", "edge_strength", "ratio"])
        for i, (line, strength) in enumerate(zip(report.lines,
                                                 report.per_line_strength)):
            ratio = strength / edge if edge > 0 else math.inf
            w.writerow([report.k if report.k is not None else "",
                        i, f"{line.point[0]:.12g}", f"{line.point[1]:.12g}",
                        line.j, f"{strength:.12g}", f"{edge:.12g}",
                        f"{ratio:.12g}"])


def write_study_summary(rows: list[StudyRow], path) -> None:
    """Write the strength-versus-order table as JSON."""
    payload = {
        "k_list": [r.k for r in rows],
        "rows": [
            {"k": r.k, "line_strength": r.line_strength,
             "edge_strength": r.edge_strength, "ratio": r.ratio}
            for r in rows
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
