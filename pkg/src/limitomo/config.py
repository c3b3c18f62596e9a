"""Run configuration: a flat-section INI text format.

A run is described by up to seven sections (all optional, all keys
defaulted)::

    [image]
    n = 512                 # pixels per axis
    extent = 1.2            # half-width L of [-L, L]^2
    supersample = false

    [phantom]               # one shapeN key per shape, additive densities
    shape1 = disk 0 0 1 1                   # cx cy r density
    #shape2 = ellipse 0.3 0 0.5 0.3 30 0.5  # cx cy a b angle_deg density
    #shape3 = clipped-disk 0 0 1 1 0 0.2 1  # cx cy r nx ny offset density

    [sinogram]
    n_phi = 720
    phi0_deg = 0
    phi1_deg = 360          # span of 360 means the full circle
    n_s = 768
    s_max = 1.7             # default sqrt(2) * extent

    [window]
    kind = full             # full | indicator | finite-order | infinite-order
    phi1_deg = 45
    phi2_deg = 135
    k = 1                   # finite-order only

    [weights]
    mu = constant 1.0       # constant C | exponential LAM [perp|parallel]
    nu = constant 1.0

    [reconstruction]
    operator = B            # B | Lambda
    filter_impl = spectral  # spectral | finite-difference
    pad_factor = 2
    apodize = false

    [output]
    dir = out

Unknown sections or keys are rejected.  ``load_config`` fills every
default and the result echoes back as a normalized dump via
:meth:`RunConfig.dumps`.
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass

from .filters import ReconstructionConfig
from .geometry import AngularWindow, ImageGrid, SinogramGrid
from .phantoms import ClippedDisk, Disk, Ellipse, Phantom
from .transforms import WeightFunction


class ConfigError(ValueError):
    """Raised for unparsable or invalid run configurations."""


_KNOWN_KEYS = {
    "image": {"n", "extent", "supersample"},
    "phantom": None,  # shapeN keys, validated separately
    "sinogram": {"n_phi", "phi0_deg", "phi1_deg", "n_s", "s_max"},
    "window": {"kind", "phi1_deg", "phi2_deg", "k"},
    "weights": {"mu", "nu"},
    "reconstruction": {"operator", "filter_impl", "pad_factor", "apodize"},
    "output": {"dir"},
}


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Validated, fully-defaulted pipeline configuration."""

    igrid: ImageGrid
    supersample: bool
    phantom: Phantom
    phantom_spec: tuple[str, ...]
    sgrid: SinogramGrid
    mu: WeightFunction
    nu: WeightFunction
    mu_spec: str
    nu_spec: str
    window: AngularWindow | None
    operator: str
    filter_impl: str
    pad_factor: int
    apodize: bool
    out_dir: str
    seed: int = 0  # reserved; the pipeline is deterministic

    def recon_config(self) -> ReconstructionConfig:
        return ReconstructionConfig(
            operator=self.operator, mu=self.mu, nu=self.nu,
            window=self.window, filter_impl=self.filter_impl,
            pad_factor=self.pad_factor, apodize=self.apodize,
        )

    def dumps(self) -> str:
        """Normalized dump of the configuration with all defaults filled."""
        lines = ["[image]",
                 f"n = {self.igrid.n}",
                 f"extent = {self.igrid.extent:.12g}",
                 f"supersample = {str(self.supersample).lower()}",
                 "",
                 "[phantom]"]
        for i, spec in enumerate(self.phantom_spec, start=1):
            lines.append(f"shape{i} = {spec}")
        g = self.sgrid
        lines += ["",
                  "[sinogram]",
                  f"n_phi = {g.n_phi}",
                  f"phi0_deg = {math.degrees(g.phi0):.12g}",
                  f"phi1_deg = {math.degrees(g.phi1):.12g}",
                  f"n_s = {g.n_s}",
                  f"s_max = {g.s_max:.12g}",
                  "",
                  "[window]"]
        if self.window is None:
            lines.append("kind = full")
        else:
            w = self.window
            lines += [f"kind = {w.kind}",
                      f"phi1_deg = {math.degrees(w.phi1):.12g}",
                      f"phi2_deg = {math.degrees(w.phi2):.12g}"]
            if w.kind == "finite-order":
                lines.append(f"k = {w.k}")
        lines += ["",
                  "[weights]",
                  f"mu = {self.mu_spec}",
                  f"nu = {self.nu_spec}",
                  "",
                  "[reconstruction]",
                  f"operator = {self.operator}",
                  f"filter_impl = {self.filter_impl}",
                  f"pad_factor = {self.pad_factor}",
                  f"apodize = {str(self.apodize).lower()}",
                  "",
                  "[output]",
                  f"dir = {self.out_dir}",
                  ""]
        return "\n".join(lines)

    def sha256(self) -> str:
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()


def _parse_bool(raw: str, where: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{where}: expected a boolean, got {raw!r}")


def _parse_shape(key: str, raw: str):
    parts = raw.split()
    if not parts:
        raise ConfigError(f"[phantom] {key}: empty shape specification")
    kind, args = parts[0], parts[1:]
    try:
        vals = [float(a) for a in args]
    except ValueError:
        raise ConfigError(f"[phantom] {key}: non-numeric shape parameter in {raw!r}")
    try:
        if kind == "disk":
            if len(vals) != 4:
                raise ConfigError(f"[phantom] {key}: disk needs cx cy r density")
            shape = Disk((vals[0], vals[1]), vals[2], vals[3])
            norm = f"disk {vals[0]:.12g} {vals[1]:.12g} {vals[2]:.12g} {vals[3]:.12g}"
        elif kind == "ellipse":
            if len(vals) != 6:
                raise ConfigError(f"[phantom] {key}: ellipse needs cx cy a b angle_deg density")
            shape = Ellipse((vals[0], vals[1]), vals[2], vals[3],
                            math.radians(vals[4]), vals[5])
            norm = ("ellipse " + " ".join(f"{v:.12g}" for v in vals))
        elif kind == "clipped-disk":
            if len(vals) != 7:
                raise ConfigError(f"[phantom] {key}: clipped-disk needs cx cy r nx ny offset density")
            shape = ClippedDisk((vals[0], vals[1]), vals[2],
                                (vals[3], vals[4]), vals[5], vals[6])
            norm = ("clipped-disk " + " ".join(f"{v:.12g}" for v in vals))
        else:
            raise ConfigError(f"[phantom] {key}: unknown shape type {kind!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"[phantom] {key}: {exc}") from exc
    return shape, norm


def _parse_weight(raw: str, where: str) -> tuple[WeightFunction, str]:
    parts = raw.split()
    try:
        if parts and parts[0] == "constant" and len(parts) == 2:
            c = float(parts[1])
            return WeightFunction.constant(c), f"constant {c:.12g}"
        if parts and parts[0] == "exponential" and len(parts) in (2, 3):
            lam = float(parts[1])
            mode = parts[2] if len(parts) == 3 else "perp"
            return WeightFunction.exponential(lam, mode), f"exponential {lam:.12g} {mode}"
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(
        f"{where}: expected 'constant C' or 'exponential LAM [perp|parallel]', got {raw!r}"
    )


def loads_config(text: str) -> RunConfig:
    """Parse and validate a configuration from text."""
    parser = configparser.ConfigParser(interpolation=None,
                                       inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"parse error: {exc}") from exc

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        known = _KNOWN_KEYS[section]
        for key in parser.options(section):
            if known is None:
                if not key.startswith("shape"):
                    raise ConfigError(f"[phantom] unknown key {key!r} (expected shapeN)")
            elif key not in known:
                raise ConfigError(f"[{section}] unknown key {key!r}")

    def get(section, key, default):
        if parser.has_option(section, key):
            return parser.get(section, key)
        return default

    where = "[image]"
    try:
        n = int(get("image", "n", "512"))
        extent = float(get("image", "extent", "1.2"))
        igrid = ImageGrid(n, extent)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    supersample = _parse_bool(get("image", "supersample", "false"), where)

    shapes, specs = [], []
    if parser.has_section("phantom") and parser.options("phantom"):
        for key in sorted(parser.options("phantom"),
                          key=lambda k: (len(k), k)):
            shape, norm = _parse_shape(key, parser.get("phantom", key))
            shapes.append(shape)
            specs.append(norm)
    else:
        shapes = [Disk((0.0, 0.0), 1.0, 1.0)]
        specs = ["disk 0 0 1 1"]
    phantom = Phantom(tuple(shapes))
    if not phantom.fits_inside(igrid):
        raise ConfigError("phantom must lie strictly inside the image extent")

    where = "[sinogram]"
    try:
        n_phi = int(get("sinogram", "n_phi", "720"))
        phi0 = math.radians(float(get("sinogram", "phi0_deg", "0")))
        phi1 = math.radians(float(get("sinogram", "phi1_deg", "360")))
        n_s = int(get("sinogram", "n_s", "768"))
        s_default = math.sqrt(2.0) * igrid.extent
        s_max = float(get("sinogram", "s_max", repr(s_default)))
        sgrid = SinogramGrid(n_phi, n_s, s_max, phi0, phi1)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    if s_max < math.sqrt(2.0) * igrid.extent - 1e-12:
        raise ConfigError(
            f"{where}: s_max = {s_max:.6g} violates s_max >= sqrt(2) * extent "
            f"= {math.sqrt(2.0) * igrid.extent:.6g}"
        )

    where = "[window]"
    kind = get("window", "kind", "full").strip()
    if kind == "full":
        window = None
    else:
        try:
            wphi1 = math.radians(float(get("window", "phi1_deg", "45")))
            wphi2 = math.radians(float(get("window", "phi2_deg", "135")))
            k = int(get("window", "k", "1"))
            window = AngularWindow(wphi1, wphi2, kind, k)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc

    mu, mu_spec = _parse_weight(get("weights", "mu", "constant 1.0"), "[weights] mu")
    nu, nu_spec = _parse_weight(get("weights", "nu", "constant 1.0"), "[weights] nu")

    where = "[reconstruction]"
    operator = get("reconstruction", "operator", "B").strip()
    filter_impl = get("reconstruction", "filter_impl", "spectral").strip()
    try:
        pad_factor = int(get("reconstruction", "pad_factor", "2"))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    apodize = _parse_bool(get("reconstruction", "apodize", "false"), where)

    out_dir = get("output", "dir", "out").strip()

    cfg = RunConfig(
        igrid=igrid, supersample=supersample, phantom=phantom,
        phantom_spec=tuple(specs), sgrid=sgrid, mu=mu, nu=nu,
        mu_spec=mu_spec, nu_spec=nu_spec, window=window,
        operator=operator, filter_impl=filter_impl, pad_factor=pad_factor,
        apodize=apodize, out_dir=out_dir,
    )
    try:
        cfg.recon_config()
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    if window is not None and not sgrid.periodic:
        if window.phi1 < sgrid.phi0 - 1e-12 or window.phi2 > sgrid.phi1 + 1e-12:
            raise ConfigError("[window] window must lie inside the sinogram angular range")
    return cfg


def load_config(path) -> RunConfig:
    """Load and validate a configuration file (UTF-8 INI)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return loads_config(text)
