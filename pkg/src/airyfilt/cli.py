"""Command line front end.

Exit codes: 0 success, 2 usage, 3 validation/sampling, 4 numerical check,
5 I/O.  Every subcommand is a pure function of its inputs; identical inputs
produce bit-identical output files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fio
from .apodize import ApodizerSpec, compare_pipelines, gaussian_apodize, measure_quality
from .demos import DEMO_NAMES, run_demo
from .errors import (
    CalibrationError,
    ConfigError,
    DemoCheckError,
    GeometryError,
    GridError,
    NoHalfCrossingError,
    OracleSizeError,
    SamplingError,
    SpecError,
)
from .field import ComplexField, GridSpec, ImagingConfig, gen_object, line_profile, point_object
from .pbnf import CurvatureSpec, PhaseFilterSpec, apply_pbnf, filter_report
from .propagation import circular_pupil, fresnel_psf
from .zoneplate import Hologram, ZonePlateSpec, calibrate_base_phase, decode_hologram, encode_hologram

_VALIDATION_ERRORS = (GridError, GeometryError, ConfigError, SamplingError, SpecError)
_NUMERICAL_ERRORS = (CalibrationError, OracleSizeError, NoHalfCrossingError, DemoCheckError)

_CONFIG_KEYS = """\
config file: one "key = value" per line, '#' starts a comment; flags override.
keys: nx ny dx dy wavelength distance magnification amplitude diameter sigma
      r1 profile support_radius obscuration_radius
      mode epsilon window_lo window_hi base_phase curv_z curv_wavelength
      origin_u origin_v amp_floor"""


def _load_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {raw!r} is not 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        cfg[key] = value
    return cfg


class Settings:
    """Flag values with config-file fallback."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = _load_config(getattr(args, "config", None))

    def get(self, name: str, cast=float, default=None):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        if name in self.config:
            raw = self.config[name]
            return raw if cast is str else cast(raw)
        return default

    def require(self, name: str, cast=float):
        value = self.get(name, cast)
        if value is None:
            raise ConfigError(f"missing required setting {name!r} (flag or config key)")
        return value

    def grid(self) -> GridSpec:
        return GridSpec(
            int(self.get("nx", int, 512)),
            int(self.get("ny", int, 512)),
            self.get("dx", float, 10e-6),
            self.get("dy", float, 10e-6),
        )

    def imaging(self) -> ImagingConfig:
        return ImagingConfig(
            wavelength=self.get("wavelength", float, 632.8e-9),
            distance=self.get("distance", float, 0.05),
            magnification=self.get("magnification", float, 1.0),
            amplitude=self.get("amplitude", float, 1.0),
        )

    def plate(self) -> ZonePlateSpec:
        return ZonePlateSpec(
            r1=self.require("r1"),
            profile=self.get("profile", str, "sinusoidal"),
            support_radius=self.get("support_radius", float),
            obscuration_radius=self.get("obscuration_radius", float, 0.0),
        )

    def filter_spec(self) -> PhaseFilterSpec:
        mode = self.get("mode", str, "odd-reject")
        window = None
        lo = self.get("window_lo", float)
        hi = self.get("window_hi", float)
        if lo is not None or hi is not None:
            if lo is None or hi is None:
                raise ConfigError("window mode needs both window_lo and window_hi")
            window = (lo, hi)
        curvature = None
        curv_z = self.get("curv_z", float)
        if curv_z is not None:
            curvature = CurvatureSpec(
                z=curv_z,
                wavelength=self.get("curv_wavelength", float, self.get("wavelength", float, 632.8e-9)),
                origin=(self.get("origin_u", float, 0.0), self.get("origin_v", float, 0.0)),
            )
        return PhaseFilterSpec(
            mode=mode,
            base_phase=self.get("base_phase", float, np.pi / 2),
            epsilon=self.get("epsilon", float, 0.2),
            window=window,
            curvature=curvature,
            amp_floor=self.get("amp_floor", float),
        )


def _write_field_outputs(out: str, f: ComplexField) -> None:
    fio.save_field(f"{out}.fld", f)
    fio.save_png(f"{out}.png", f.intensity())


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_gen_object(args) -> int:
    s = Settings(args)
    grid = s.grid()
    kind = args.kind.replace("-", "_")
    params = {}
    if kind == "ring":
        params = {"r_in": s.require("r_in") * grid.dx, "r_out": s.require("r_out") * grid.dx}
    elif kind == "letter_h":
        params = {"stroke": s.require("stroke") * grid.dx}
    elif kind == "text":
        params = {"text": s.require("string", str), "scale": int(s.get("scale", int, 4))}
    elif kind == "point":
        params = {"i": int(s.require("i", int)), "j": int(s.require("j", int))}
    elif kind == "two_point":
        params = {
            "i1": int(s.require("i1", int)), "j1": int(s.require("j1", int)),
            "i2": int(s.require("i2", int)), "j2": int(s.require("j2", int)),
        }
    obj = gen_object(kind, grid, **params)
    _write_field_outputs(args.out, obj)
    print(f"wrote {args.out}.fld and {args.out}.png")
    return 0


def _cmd_psf(args) -> int:
    s = Settings(args)
    cfg = s.imaging()
    pupil = circular_pupil(s.grid(), s.require("diameter"))
    if args.sigma is not None:
        pupil = gaussian_apodize(pupil, ApodizerSpec(args.sigma))
    psf = fresnel_psf(pupil, cfg)
    _write_field_outputs(args.out, psf)
    fio.save_profile_csv(f"{args.out}_profile.csv", line_profile(psf, "row", psf.grid.center[0]))
    print(f"wrote {args.out}.fld, {args.out}.png and {args.out}_profile.csv")
    return 0


def _cmd_encode(args) -> int:
    s = Settings(args)
    obj, _ = fio.load_field(args.infile)
    holo = encode_hologram(obj, s.plate(), obj.grid, s.get("wavelength", float, 632.8e-9))
    fio.save_real_field(f"{args.out}.fld", holo.grid, holo.data)
    fio.save_png(f"{args.out}.png", holo.data)
    print(f"wrote {args.out}.fld and {args.out}.png")
    return 0


def _cmd_decode(args) -> int:
    s = Settings(args)
    loaded, is_real = fio.load_field(args.infile)
    if not is_real:
        raise ConfigError(f"{args.infile} is not a real-valued hologram file")
    plate = s.plate()
    lam = s.get("wavelength", float, 632.8e-9)
    holo = Hologram(loaded.grid, loaded.data.real, spec=plate, wavelength=lam)
    dec = decode_hologram(holo, plate, lam, subtract_bias=args.subtract_bias)
    if args.calibrate:
        peak = np.unravel_index(int(np.argmax(np.abs(dec.data))), dec.data.shape)
        dec, rotation = calibrate_base_phase(dec, peak)
        print(f"calibrated at {tuple(int(v) for v in peak)}: rotation {rotation:+.6f} rad")
    _write_field_outputs(args.out, dec)
    print(f"wrote {args.out}.fld and {args.out}.png")
    return 0


def _cmd_filter(args) -> int:
    s = Settings(args)
    f, _ = fio.load_field(args.infile)
    spec = s.filter_spec()
    out = apply_pbnf(f, spec)
    report = filter_report(f, out, {"all": np.ones(f.grid.shape, dtype=bool)})
    _write_field_outputs(args.out, out)
    fio.save_metrics(f"{args.out}_report.json", report.as_dict())
    print(f"wrote {args.out}.fld, {args.out}.png and {args.out}_report.json")
    return 0


def _cmd_apodize(args) -> int:
    s = Settings(args)
    cfg = s.imaging()
    pupil = gaussian_apodize(
        circular_pupil(s.grid(), s.require("diameter")), ApodizerSpec(s.require("sigma"))
    )
    psf = fresnel_psf(pupil, cfg)
    _write_field_outputs(args.out, psf)
    metrics = measure_quality(psf, psf.grid.center)
    fio.save_metrics(f"{args.out}_metrics.json", metrics.as_dict())
    print(f"wrote {args.out}.fld, {args.out}.png and {args.out}_metrics.json")
    return 0


def _cmd_compare(args) -> int:
    s = Settings(args)
    cfg = s.imaging()
    grid = s.grid()
    diameter = s.require("diameter")
    pupil = circular_pupil(grid, diameter)
    du = cfg.wavelength * cfg.distance / (grid.nx * grid.dx)
    dv = cfg.wavelength * cfg.distance / (grid.ny * grid.dy)
    img_grid = GridSpec(grid.nx, grid.ny, du, dv)
    obj = point_object(img_grid, *img_grid.center)
    spec = PhaseFilterSpec(
        mode="odd-reject", base_phase=0.0,
        curvature=CurvatureSpec(cfg.distance, cfg.wavelength),
    )
    record = compare_pipelines(obj, pupil, cfg, ApodizerSpec(args.sigma_over_d * diameter), spec)
    fio.save_metrics(args.out, record.as_dict())
    print(
        f"wrote {args.out}: filtered fwhm smaller: {record.filtered_fwhm_smaller}, "
        f"filtered peak larger: {record.filtered_peak_larger}"
    )
    return 0


def _cmd_demo(args) -> int:
    outdir = args.out or f"demo_{args.name}"
    result = run_demo(args.name, outdir)
    for name, ok, detail in result.checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    result.ensure_passed()
    print(f"demo {args.name} outputs in {outdir}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="airyfilt",
        description="Band-limited imaging, zone-plate holography, and phase-based sidelobe filtering.",
        epilog=_CONFIG_KEYS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="flat key = value settings file")
        sp.add_argument("--nx", type=int, help="grid pixels along x (default 512)")
        sp.add_argument("--ny", type=int, help="grid pixels along y (default 512)")
        sp.add_argument("--dx", type=float, help="pixel pitch x in meters (default 10e-6)")
        sp.add_argument("--dy", type=float, help="pixel pitch y in meters (default 10e-6)")
        sp.add_argument("--wavelength", type=float, help="wavelength in meters (default 632.8e-9)")

    g = sub.add_parser("gen-object", help="rasterize a test object to a field file")
    add_common(g)
    g.add_argument("kind", choices=["ring", "letter-h", "text", "point", "two-point"])
    g.add_argument("--r-in", dest="r_in", type=float, help="inner ring radius in pixels")
    g.add_argument("--r-out", dest="r_out", type=float, help="outer ring radius in pixels")
    g.add_argument("--stroke", type=float, help="letter stroke width in pixels")
    g.add_argument("--string", help="text to rasterize")
    g.add_argument("--scale", type=int, help="pixels per font cell (default 4)")
    for name in ("i", "j", "i1", "j1", "i2", "j2"):
        g.add_argument(f"--{name}", type=int, help=f"pixel index {name}")
    g.add_argument("--out", default="object", help="output basename")
    g.set_defaults(func=_cmd_gen_object)

    ps = sub.add_parser("psf", help="point spread function of a circular pupil")
    add_common(ps)
    ps.add_argument("--pupil", choices=["circular"], default="circular")
    ps.add_argument("--d", dest="diameter", type=float, help="aperture diameter in meters")
    ps.add_argument("--distance", type=float, help="propagation distance in meters")
    ps.add_argument("--amplitude", type=float, help="amplitude constant (default 1)")
    ps.add_argument("--sigma", type=float, help="optional Gaussian apodizer sigma in meters")
    ps.add_argument("--out", default="psf", help="output basename")
    ps.set_defaults(func=_cmd_psf)

    def add_plate(sp):
        sp.add_argument("--r1", type=float, help="innermost zone radius in meters")
        sp.add_argument("--profile", choices=["sinusoidal", "binary"])
        sp.add_argument("--support-radius", dest="support_radius", type=float,
                        help="plate aperture radius in meters")
        sp.add_argument("--obscuration-radius", dest="obscuration_radius", type=float,
                        help="central stop radius in meters")

    e = sub.add_parser("encode", help="record a zone-plate hologram of an object field")
    add_common(e)
    add_plate(e)
    e.add_argument("--in", dest="infile", required=True, help="object field file")
    e.add_argument("--out", default="hologram", help="output basename")
    e.set_defaults(func=_cmd_encode)

    d = sub.add_parser("decode", help="reconstruct a hologram at its first-order focus")
    add_common(d)
    add_plate(d)
    d.add_argument("--in", dest="infile", required=True, help="hologram field file")
    d.add_argument("--subtract-bias", action="store_true", help="remove the smooth shadow bias")
    d.add_argument("--calibrate", action="store_true",
                   help="rotate the global phase so the peak sits at pi/2")
    d.add_argument("--out", default="decoded", help="output basename")
    d.set_defaults(func=_cmd_decode)

    f = sub.add_parser("filter", help="phase-based sidelobe filtering of a complex field")
    add_common(f)
    f.add_argument("--in", dest="infile", required=True, help="complex field file")
    f.add_argument("--mode", choices=["odd-reject", "base-only", "window"])
    f.add_argument("--epsilon", type=float, help="base-only half-width in radians (default 0.2)")
    f.add_argument("--window-lo", dest="window_lo", type=float, help="window start in radians")
    f.add_argument("--window-hi", dest="window_hi", type=float, help="window end in radians")
    f.add_argument("--base-phase", dest="base_phase", type=float,
                   help="signal base phase in radians (default pi/2)")
    f.add_argument("--curv-z", dest="curv_z", type=float,
                   help="divide out quadratic phase for this distance (meters)")
    f.add_argument("--curv-wavelength", dest="curv_wavelength", type=float)
    f.add_argument("--origin-u", dest="origin_u", type=float, help="curvature origin u (meters)")
    f.add_argument("--origin-v", dest="origin_v", type=float, help="curvature origin v (meters)")
    f.add_argument("--amp-floor", dest="amp_floor", type=float,
                   help="absolute amplitude floor for phase decisions")
    f.add_argument("--out", default="filtered", help="output basename")
    f.set_defaults(func=_cmd_filter)

    a = sub.add_parser("apodize", help="PSF through a Gaussian-apodized circular pupil")
    add_common(a)
    a.add_argument("--d", dest="diameter", type=float, help="aperture diameter in meters")
    a.add_argument("--sigma", type=float, help="Gaussian 1/e amplitude radius in meters")
    a.add_argument("--distance", type=float, help="propagation distance in meters")
    a.add_argument("--amplitude", type=float)
    a.add_argument("--out", default="apodized", help="output basename")
    a.set_defaults(func=_cmd_apodize)

    c = sub.add_parser("compare", help="apodized imaging vs phase filtering on a point object")
    add_common(c)
    c.add_argument("--sigma-over-d", dest="sigma_over_d", type=float, default=0.25,
                   help="apodizer sigma as a fraction of the aperture diameter")
    c.add_argument("--d", dest="diameter", type=float, help="aperture diameter in meters")
    c.add_argument("--distance", type=float, help="propagation distance in meters")
    c.add_argument("--amplitude", type=float)
    c.add_argument("--magnification", type=float)
    c.add_argument("--out", default="comparison.json", help="output metrics file")
    c.set_defaults(func=_cmd_compare)

    dm = sub.add_parser("demo", help="run a bundled experiment end to end")
    dm.add_argument("name", choices=list(DEMO_NAMES))
    dm.add_argument("--out", help="output directory (default demo_<name>)")
    dm.set_defaults(func=_cmd_demo)

    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
