"""Zone-plate coded incoherent holography: encode and decode.

Each point of an incoherent (intensity) object casts a zone-plate shadow on
the recording plane; the recorded sum of shadows is decoded by treating it as
a coherent amplitude transparency and propagating it to the plate's first-order
focus f = r1^2/lambda, where every shadow collapses back to a point.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import CalibrationError, ConfigError, GridError, SamplingError
from .field import ComplexField, GridSpec, default_amp_floor
from .propagation import angular_spectrum_propagate, fft2c, ifft2c

__all__ = [
    "ZonePlateSpec",
    "Hologram",
    "zone_plate_transmittance",
    "encode_hologram",
    "decode_hologram",
    "calibrate_base_phase",
]


@dataclass(frozen=True)
class ZonePlateSpec:
    """Zone plate geometry.

    r1 is the innermost zone radius; the first-order focal length for
    wavelength lam is r1^2/lam.  ``support_radius`` limits the plate to a
    circular aperture (None = the whole grid); ``obscuration_radius`` blocks
    a central disk, as in plates with a center stop.
    """

    r1: float
    profile: str = "sinusoidal"
    support_radius: float | None = None
    obscuration_radius: float = 0.0

    def __post_init__(self):
        if self.r1 <= 0:
            raise ConfigError(f"innermost zone radius must be > 0, got {self.r1}")
        if self.profile not in ("sinusoidal", "binary"):
            raise ConfigError(f"profile must be 'sinusoidal' or 'binary', got {self.profile!r}")
        if self.support_radius is not None and self.support_radius <= 0:
            raise ConfigError(f"support radius must be > 0, got {self.support_radius}")
        if self.obscuration_radius < 0:
            raise ConfigError(f"obscuration radius must be >= 0, got {self.obscuration_radius}")
        if (
            self.support_radius is not None
            and self.obscuration_radius >= self.support_radius
        ):
            raise ConfigError("obscuration must be smaller than the support radius")

    def focal_length(self, wavelength: float) -> float:
        if wavelength <= 0:
            raise ConfigError(f"wavelength must be > 0, got {wavelength}")
        return self.r1**2 / wavelength


@dataclass
class Hologram:
    """Recorded intensity pattern plus the geometry it was encoded with."""

    grid: GridSpec
    data: np.ndarray = dc_field(repr=False)
    spec: ZonePlateSpec | None = None
    wavelength: float | None = None

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.shape != self.grid.shape:
            raise GridError(f"data shape {self.data.shape} does not match grid {self.grid.shape}")
        if self.data.min() < 0:
            raise ConfigError("hologram samples must be nonnegative")


def _max_plate_radius(spec: ZonePlateSpec, grid: GridSpec) -> float:
    corner = np.hypot(grid.nx // 2 * grid.dx, grid.ny // 2 * grid.dy)
    return corner if spec.support_radius is None else min(corner, spec.support_radius)


def _check_zone_sampling(spec: ZonePlateSpec, grid: GridSpec) -> None:
    # Zone m spans radii r1*sqrt(m)..r1*sqrt(m+1); the outermost zone on the
    # plate must be at least two pixels wide or the fringes alias.
    r_max = _max_plate_radius(spec, grid)
    m = int(np.floor((r_max / spec.r1) ** 2))
    width = spec.r1 * (np.sqrt(m + 1) - np.sqrt(m))
    need = 2.0 * max(grid.dx, grid.dy)
    if width < need:
        raise SamplingError(
            f"outermost zone (index {m}, width {width:.6g} m at r = {r_max:.6g} m) "
            f"is narrower than 2 pixels = {need:.6g} m; increase r1 or shrink the plate"
        )


def zone_plate_transmittance(
    spec: ZonePlateSpec, grid: GridSpec, wavelength: float | None = None
) -> np.ndarray:
    """Plate transmittance on the grid, radially symmetric about its centre.

    Sinusoidal profile: t(r) = (1 + cos(pi r^2 / r1^2)) / 2; binary plates
    threshold the same pattern at 1/2.  The pattern itself does not depend on
    wavelength (only the focal length does).
    """
    if wavelength is not None and wavelength <= 0:
        raise ConfigError(f"wavelength must be > 0, got {wavelength}")
    _check_zone_sampling(spec, grid)
    X, Y = grid.mesh()
    r2 = X**2 + Y**2
    t = 0.5 * (1.0 + np.cos(np.pi * r2 / spec.r1**2))
    if spec.profile == "binary":
        t = (t >= 0.5).astype(np.float64)
    if spec.support_radius is not None:
        t = np.where(r2 <= spec.support_radius**2, t, 0.0)
    if spec.obscuration_radius > 0:
        t = np.where(r2 < spec.obscuration_radius**2, 0.0, t)
    return t


def encode_hologram(
    obj: ComplexField, spec: ZonePlateSpec, grid: GridSpec, wavelength: float
) -> Hologram:
    """Shadowgraph recording: |O|^2 convolved with the plate pattern.

    The object must be an intensity-like field (zero phase); the convolution
    is circular, consistent with the periodic propagation model used for
    decoding.
    """
    if not obj.grid.same_geometry(grid):
        raise GridError(f"object grid {obj.grid.shape} does not match hologram grid {grid.shape}")
    if np.abs(obj.data.imag).max() > 1e-12 * max(np.abs(obj.data).max(), 1e-300):
        raise ConfigError("incoherent encoding needs a zero-phase object field")
    q = np.abs(obj.data) ** 2
    t = zone_plate_transmittance(spec, grid, wavelength)
    conv = np.sqrt(grid.nx * grid.ny) * ifft2c(fft2c(q) * fft2c(t))
    shadow = np.maximum(conv.real, 0.0)  # clip FFT round-off below zero
    return Hologram(grid, shadow, spec=spec, wavelength=wavelength)


def _suppress_bias(data: np.ndarray, grid: GridSpec, spec: ZonePlateSpec) -> np.ndarray:
    # The shadow bias is spatially smooth on the scale of the plate aperture;
    # cutting spatial frequencies below ~3 aperture-diffraction widths removes
    # it while leaving the zone fringes (which encode position) untouched.
    radius = _max_plate_radius(spec, grid)
    cutoff = 3.0 * 0.61 / radius
    FX, FY = grid.fmesh()
    mask = np.hypot(FX, FY) > cutoff
    return ifft2c(mask * fft2c(data))


def decode_hologram(
    holo: Hologram,
    spec: ZonePlateSpec,
    wavelength: float,
    subtract_bias: bool = False,
) -> ComplexField:
    """Simulated coherent reconstruction of a hologram.

    The hologram is taken as an amplitude transparency under unit plane-wave
    illumination and propagated to the first-order focus f = r1^2/lambda.
    The raw decode keeps the bias and twin-image background; PBNF is meant to
    operate on this raw field.  ``subtract_bias=True`` optionally removes the
    smooth shadow bias first (an experiment-convenience preprocessing step).
    """
    _check_zone_sampling(spec, holo.grid)
    data = holo.data.astype(np.complex128)
    if subtract_bias:
        data = _suppress_bias(data, holo.grid, spec)
    f = spec.focal_length(wavelength)
    return angular_spectrum_propagate(ComplexField(holo.grid, data), f, wavelength)


def calibrate_base_phase(
    f: ComplexField, reference_point: tuple[int, int], amp_floor: float | None = None
) -> tuple[ComplexField, float]:
    """Rotate the global phase so the reference sample sits exactly at pi/2.

    Propagation conventions only fix the decoded phase up to a constant; this
    pins that gauge at a bright reference point.  Returns the rotated field
    and the applied rotation in radians.
    """
    i, j = reference_point
    if not (0 <= i < f.grid.nx and 0 <= j < f.grid.ny):
        raise CalibrationError(f"reference point {reference_point} outside grid {f.grid.shape}")
    if amp_floor is None:
        amp_floor = default_amp_floor(f.data)
    ref = f.data[i, j]
    if np.abs(ref) <= amp_floor:
        raise CalibrationError(
            f"reference amplitude {np.abs(ref):.3g} at {reference_point} is at or below "
            f"the floor {amp_floor:.3g}"
        )
    rotation = float(np.pi / 2 - np.angle(ref))
    return ComplexField(f.grid, f.data * np.exp(1j * rotation)), rotation
