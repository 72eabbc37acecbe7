"""Bundled end-to-end experiments, runnable from the command line.

Each demo builds an object, encodes it as a zone-plate hologram, decodes it,
applies phase filtering, writes image panels / profiles / metrics when given
an output directory, and asserts the properties the scenario is meant to
exhibit:

* ``fig4``  a thin ring whose decoded image grows a spurious on-axis peak
            brighter than the ring itself; odd-order rejection removes it
            while intensity thresholding could not.
* ``fig5``  letter H; a phase-window sweep admits the second-order noise ring
            to a tunable extent, then a base-phase filter removes all of it.
* ``fig6``  the word MUKT; odd-order rejection, then full sidelobe cleanup.
* ``fig7``  Gaussian pupil apodization vs phase filtering on a point object:
            the phase-filtered image keeps both a narrower peak and more
            signal for every apodizer width.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np
from scipy.special import jn_zeros

from . import fio
from .apodize import ApodizerSpec, compare_pipelines
from .errors import DemoCheckError
from .field import (
    ComplexField,
    GridSpec,
    ImagingConfig,
    letter_h_object,
    line_profile,
    point_object,
    ring_object,
    text_object,
)
from .pbnf import CurvatureSpec, PhaseFilterSpec, apply_pbnf
from .propagation import circular_pupil
from .zoneplate import Hologram, ZonePlateSpec, calibrate_base_phase, decode_hologram, encode_hologram

__all__ = ["DemoResult", "run_demo", "DEMO_NAMES", "DEFAULT_GRID", "WAVELENGTH"]

WAVELENGTH = 632.8e-9
DEFAULT_GRID = GridSpec(512, 512, 10e-6, 10e-6)


@dataclass
class DemoResult:
    name: str
    metrics: dict
    checks: list[tuple[str, bool, str]] = dc_field(default_factory=list)

    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def ensure_passed(self) -> None:
        failed = [(n, d) for n, ok, d in self.checks if not ok]
        if failed:
            lines = "; ".join(f"{n}: {d}" for n, d in failed)
            raise DemoCheckError(f"demo {self.name} failed checks -- {lines}")


def _decode_gauge(
    grid: GridSpec, plate: ZonePlateSpec, wavelength: float, subtract_bias: bool
) -> float:
    """Global phase rotation that puts a decoded point's peak at pi/2.

    The rotation depends only on the geometry and propagation conventions,
    so it is measured once on a reference point and reused for any object.
    """
    ci, cj = grid.center
    ref = point_object(grid, ci, cj)
    holo = encode_hologram(ref, plate, grid, wavelength)
    dec = decode_hologram(holo, plate, wavelength, subtract_bias=subtract_bias)
    peak = np.unravel_index(int(np.argmax(np.abs(dec.data))), dec.data.shape)
    _, rotation = calibrate_base_phase(dec, peak)
    return rotation


def _decode_object(
    obj: ComplexField,
    plate: ZonePlateSpec,
    wavelength: float,
    subtract_bias: bool,
) -> tuple[ComplexField, Hologram]:
    grid = obj.grid
    gauge = _decode_gauge(grid, plate, wavelength, subtract_bias)
    holo = encode_hologram(obj, plate, grid, wavelength)
    dec = decode_hologram(holo, plate, wavelength, subtract_bias=subtract_bias)
    return ComplexField(grid, dec.data * np.exp(1j * gauge)), holo


def _write_panels(outdir: Path | None, panels: dict[str, np.ndarray], metrics: dict,
                  profiles: dict[str, tuple] | None = None) -> None:
    if outdir is None:
        return
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, values in panels.items():
        fio.save_png(outdir / f"{name}.png", values)
    for name, prof in (profiles or {}).items():
        fio.save_profile_csv(outdir / f"{name}.csv", prof)
    fio.save_metrics(outdir / "metrics.json", metrics)


# ---------------------------------------------------------------------------
# fig4: thin ring, spurious central peak, odd-order rejection
# ---------------------------------------------------------------------------

def _run_fig4(outdir: Path | None) -> DemoResult:
    grid = DEFAULT_GRID
    lam = WAVELENGTH
    # Central obscuration strengthens the decode kernel's first sidelobe ring,
    # which is what piles up on axis when the object is a thin circle.
    plate = ZonePlateSpec(
        r1=400e-6, support_radius=1.8e-3, obscuration_radius=0.99e-3
    )
    ci, cj = grid.center
    checks: list[tuple[str, bool, str]] = []

    chosen = None
    for radius_px in (7.0, 8.0, 6.0):
        ring = ring_object(grid, (radius_px - 0.5) * grid.dx, (radius_px + 0.5) * grid.dx)
        dec, holo = _decode_object(ring, plate, lam, subtract_bias=False)
        inten = dec.intensity()
        on_ring = ring.data.real > 0
        center_i = float(inten[ci, cj])
        ring_max = float(inten[on_ring].max())
        if center_i > ring_max:
            chosen = (radius_px, ring, holo, dec, center_i, ring_max)
            break
    if chosen is None:
        raise DemoCheckError("fig4: no ring radius produced an on-axis peak above the ring")
    radius_px, ring, holo, dec, center_i, ring_max = chosen

    spec = PhaseFilterSpec(mode="odd-reject", base_phase=np.pi / 2)
    filt = apply_pbnf(dec, spec)
    inten_f = filt.intensity()
    on_ring = ring.data.real > 0
    center_after = float(inten_f[ci, cj])
    ring_peak_after = float(inten_f[on_ring].max())

    checks.append((
        "center-shoots-over-signal",
        center_i > ring_max,
        f"center {center_i:.4g} vs ring max {ring_max:.4g}",
    ))
    checks.append((
        "odd-reject-removes-fake-peak",
        center_after < 0.1 * ring_peak_after,
        f"center {center_after:.4g} vs 10% of ring peak {0.1 * ring_peak_after:.4g}",
    ))

    metrics = {
        "ring_radius_px": radius_px,
        "center_intensity_raw": center_i,
        "ring_max_intensity_raw": ring_max,
        "center_intensity_filtered": center_after,
        "ring_peak_intensity_filtered": ring_peak_after,
        "checks": {n: ok for n, ok, _ in checks},
    }
    _write_panels(
        outdir,
        {
            "object": ring.intensity(),
            "hologram": holo.data,
            "decoded": dec.intensity(),
            "odd_filtered": inten_f,
        },
        metrics,
        {
            "decoded_profile": line_profile(dec, "row", ci),
            "odd_filtered_profile": line_profile(filt, "row", ci),
        },
    )
    return DemoResult("fig4", metrics, checks)


# ---------------------------------------------------------------------------
# fig5 / fig6: extended objects, window sweep and full cleanup
# ---------------------------------------------------------------------------

_LETTER_PLATE = ZonePlateSpec(r1=400e-6, support_radius=1.6e-3)


def _letter_noise_scale(plate: ZonePlateSpec, lam: float) -> float:
    """Within-lobe phase spread rate of the decode kernel: pi*lambda*f/D^2."""
    f = plate.focal_length(lam)
    d = 2 * plate.support_radius
    return np.pi * lam * f / d**2


def _run_letter_demo(
    name: str, obj: ComplexField, outdir: Path | None, sweep: bool
) -> DemoResult:
    lam = WAVELENGTH
    plate = _LETTER_PLATE
    dec, holo = _decode_object(obj, plate, lam, subtract_bias=True)
    inten = dec.intensity()
    on = obj.data.real > 0
    off = ~on
    sig_raw = float(inten[on].sum())
    bg_raw = float(inten[off].sum())
    checks: list[tuple[str, bool, str]] = []
    panels = {"object": obj.intensity(), "hologram": holo.data, "decoded": inten}
    metrics: dict = {"signal_energy_raw": sig_raw, "background_energy_raw": bg_raw}

    odd = apply_pbnf(dec, PhaseFilterSpec(mode="odd-reject", base_phase=np.pi / 2))
    i_odd = odd.intensity()
    panels["odd_filtered"] = i_odd
    metrics["odd"] = {
        "signal_retained": float(i_odd[on].sum()) / sig_raw,
        "background_retained": float(i_odd[off].sum()) / bg_raw,
    }
    checks.append((
        "odd-keeps-signal",
        metrics["odd"]["signal_retained"] >= 0.9,
        f"retained {metrics['odd']['signal_retained']:.3f}",
    ))
    checks.append((
        "odd-cuts-background",
        metrics["odd"]["background_retained"] <= 0.8,
        f"retained {metrics['odd']['background_retained']:.3f}",
    ))

    if sweep:
        # Admit the second-order ring to a growing extent: the within-lobe
        # phase spread is quadratic in radius, so windows [-eps, hi] with hi
        # sweeping that lobe's phase span let in more of the ring each step.
        kappa = _letter_noise_scale(plate, lam)
        zeros = jn_zeros(1, 3) / np.pi
        sweep_stats = []
        prev = -np.inf
        monotone = True
        for step, hi in enumerate(np.linspace(kappa * zeros[1] ** 2, kappa * zeros[2] ** 2, 5)):
            win = apply_pbnf(
                dec,
                PhaseFilterSpec(mode="window", base_phase=np.pi / 2, window=(-0.2, float(hi))),
            )
            i_win = win.intensity()
            bg = float(i_win[off].sum()) / bg_raw
            sweep_stats.append({
                "window_hi": float(hi),
                "background_retained": bg,
                "signal_retained": float(i_win[on].sum()) / sig_raw,
            })
            panels[f"window_{step}"] = i_win
            monotone &= bg >= prev - 1e-12
            prev = bg
        metrics["window_sweep"] = sweep_stats
        steps = ", ".join(f"{s['background_retained']:.4f}" for s in sweep_stats)
        checks.append(("sweep-monotone", monotone, f"background retention steps [{steps}]"))

    base = apply_pbnf(dec, PhaseFilterSpec(mode="base-only", base_phase=np.pi / 2, epsilon=0.2))
    i_base = base.intensity()
    panels["base_filtered"] = i_base
    metrics["base_only"] = {
        "signal_retained": float(i_base[on].sum()) / sig_raw,
        "background_retained": float(i_base[off].sum()) / bg_raw,
    }
    checks.append((
        "base-keeps-signal",
        metrics["base_only"]["signal_retained"] >= 0.9,
        f"retained {metrics['base_only']['signal_retained']:.3f}",
    ))
    checks.append((
        "base-clears-background",
        metrics["base_only"]["background_retained"] <= 0.15,
        f"retained {metrics['base_only']['background_retained']:.3f}",
    ))
    metrics["checks"] = {n: ok for n, ok, _ in checks}
    ci = obj.grid.center[0]
    _write_panels(outdir, panels, metrics, {
        "decoded_profile": line_profile(dec, "row", ci),
        "base_filtered_profile": line_profile(base, "row", ci),
    })
    return DemoResult(name, metrics, checks)


def _run_fig5(outdir: Path | None) -> DemoResult:
    obj = letter_h_object(DEFAULT_GRID, 12 * DEFAULT_GRID.dx)
    return _run_letter_demo("fig5", obj, outdir, sweep=True)


def _run_fig6(outdir: Path | None) -> DemoResult:
    obj = text_object(DEFAULT_GRID, "MUKT", scale=5)
    return _run_letter_demo("fig6", obj, outdir, sweep=False)


# ---------------------------------------------------------------------------
# fig7: Gaussian apodizer vs phase filter
# ---------------------------------------------------------------------------

def _run_fig7(outdir: Path | None) -> DemoResult:
    grid = DEFAULT_GRID
    lam = WAVELENGTH
    diameter = 0.5e-3
    cfg = ImagingConfig(wavelength=lam, distance=0.05)
    pupil = circular_pupil(grid, diameter)
    # the image lives on the PSF output grid
    du = lam * cfg.distance / (grid.nx * grid.dx)
    dv = lam * cfg.distance / (grid.ny * grid.dy)
    img_grid = GridSpec(grid.nx, grid.ny, du, dv)
    obj = point_object(img_grid, *img_grid.center)

    filter_spec = PhaseFilterSpec(
        mode="odd-reject",
        base_phase=0.0,
        curvature=CurvatureSpec(cfg.distance, lam),
    )
    checks: list[tuple[str, bool, str]] = []
    records = []
    for frac in (1 / 8, 1 / 4, 1 / 2):
        rec = compare_pipelines(obj, pupil, cfg, ApodizerSpec(frac * diameter), filter_spec)
        records.append(rec)
        label = f"sigma=D*{frac:g}"
        checks.append((
            f"fwhm-smaller@{label}",
            rec.filtered_fwhm_smaller,
            f"filtered {rec.filtered.fwhm:.4g} m vs apodized {rec.apodized.fwhm:.4g} m",
        ))
        checks.append((
            f"peak-larger@{label}",
            rec.filtered_peak_larger,
            f"filtered {rec.filtered.peak_intensity:.4g} vs apodized {rec.apodized.peak_intensity:.4g}",
        ))
    metrics = {
        "aperture_diameter_m": diameter,
        "comparisons": [r.as_dict() for r in records],
        "checks": {n: ok for n, ok, _ in checks},
    }
    if outdir is not None:
        from .propagation import fresnel_psf
        from .apodize import gaussian_apodize

        psf_raw = fresnel_psf(pupil, cfg)
        filt = apply_pbnf(psf_raw, filter_spec)
        apod = fresnel_psf(gaussian_apodize(pupil, ApodizerSpec(diameter / 4)), cfg)
        ci = grid.center[0]
        _write_panels(
            Path(outdir),
            {
                "psf": psf_raw.intensity(),
                "phase_filtered": filt.intensity(),
                "apodized": apod.intensity(),
            },
            metrics,
            {
                "phase_filtered_profile": line_profile(filt, "row", ci),
                "apodized_profile": line_profile(apod, "row", ci),
            },
        )
    return DemoResult("fig7", metrics, checks)


_DEMOS = {"fig4": _run_fig4, "fig5": _run_fig5, "fig6": _run_fig6, "fig7": _run_fig7}
DEMO_NAMES = tuple(sorted(_DEMOS))


def run_demo(name: str, outdir: str | Path | None = None) -> DemoResult:
    """Run one bundled demo; writes panels/metrics when ``outdir`` is given.

    Returns the result without raising; call ``result.ensure_passed()`` to
    turn failed checks into :class:`DemoCheckError`.
    """
    if name not in _DEMOS:
        raise ValueError(f"unknown demo {name!r}; choose from {DEMO_NAMES}")
    return _DEMOS[name](None if outdir is None else Path(outdir))
