"""Diffraction-limited point spread functions, image formation and propagation.

All transforms are unitary (1/sqrt(N) per axis) and centered: the physical
origin is the sample (nx//2, ny//2) in both domains, so Parseval checks are
exact and quadratic phase factors stay symmetric about the grid centre.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ConfigError, GridError, OracleSizeError, SamplingError
from .field import ComplexField, GridSpec, ImagingConfig

__all__ = [
    "fft2c",
    "ifft2c",
    "PupilFunction",
    "circular_pupil",
    "fresnel_psf",
    "form_image",
    "angular_spectrum_propagate",
    "dft_oracle",
]


def fft2c(a: np.ndarray) -> np.ndarray:
    """Centered unitary forward FFT (origin at (n//2, n//2) in both domains)."""
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(a), norm="ortho"))


def ifft2c(a: np.ndarray) -> np.ndarray:
    """Centered unitary inverse FFT."""
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(a), norm="ortho"))


@dataclass
class PupilFunction:
    """Entrance-pupil transparency on a grid.

    ``aperture_diameter`` is set for circular apertures and is used by
    apodizer sweeps; explicit masks leave it None.
    """

    grid: GridSpec
    transparency: np.ndarray = dc_field(repr=False)
    aperture_diameter: float | None = None

    def __post_init__(self):
        self.transparency = np.asarray(self.transparency, dtype=np.complex128)
        if self.transparency.shape != self.grid.shape:
            raise GridError(
                f"transparency shape {self.transparency.shape} "
                f"does not match grid {self.grid.shape}"
            )
        if np.abs(self.transparency).max() > 1.0 + 1e-12:
            raise ConfigError("pupil transparency exceeds unit modulus")
        if self.aperture_diameter is not None:
            X, Y = self.grid.mesh()
            outside = np.hypot(X, Y) > self.aperture_diameter / 2
            if np.any(self.transparency[outside] != 0):
                raise ConfigError("circular pupil has transmission outside its aperture")


def circular_pupil(grid: GridSpec, diameter: float, fill: complex = 1.0) -> PupilFunction:
    """Uniform circular aperture of the given diameter (meters)."""
    if diameter <= 0:
        raise ConfigError(f"aperture diameter must be > 0, got {diameter}")
    X, Y = grid.mesh()
    mask = (X**2 + Y**2) <= (diameter / 2) ** 2
    return PupilFunction(grid, fill * mask.astype(np.complex128), diameter)


def _check_fresnel_sampling(grid: GridSpec, wavelength: float, z: float) -> None:
    # Image pitch lam*z/(n*d) must not exceed the source pitch, otherwise the
    # image-plane chirp exp(j*pi*r^2/(lam*z)) aliases before the grid edge.
    lz = wavelength * z
    for n, d, name in ((grid.nx, grid.dx, "x"), (grid.ny, grid.dy, "y")):
        if lz > n * d * d:
            raise SamplingError(
                f"chirp aliasing on axis {name}: lambda*z = {lz:.6g} exceeds "
                f"n*d^2 = {n * d * d:.6g} (need pitch d >= lambda*z/(n*d) = "
                f"{lz / (n * d):.6g}, have {d:.6g})"
            )


def fresnel_psf(pupil: PupilFunction, cfg: ImagingConfig) -> ComplexField:
    """Point spread function of an aperture: its near-Fraunhofer diffraction
    pattern at distance z.

    The result is

        h(u, v) = A/(lambda z) * exp[j k (u^2+v^2)/(2 z)] * T(u, v)

    where T is the pupil transform evaluated on the image grid with pitch
    ``lambda*z/(n*d)`` per axis (single-FFT form; the quadratic phase term is
    kept explicit because downstream phase filtering relies on it).  The
    constant phase factor common to all image points is dropped.

    Raises :class:`SamplingError` when the image-plane chirp would alias, and
    :class:`ConfigError` for a non-positive propagation distance.
    """
    if cfg.distance <= 0:
        raise ConfigError(f"propagation distance must be > 0, got {cfg.distance}")
    grid = pupil.grid
    _check_fresnel_sampling(grid, cfg.wavelength, cfg.distance)
    lz = cfg.wavelength * cfg.distance
    du = lz / (grid.nx * grid.dx)
    dv = lz / (grid.ny * grid.dy)
    out_grid = GridSpec(grid.nx, grid.ny, du, dv, source_pitch=(grid.dx, grid.dy))
    U, V = out_grid.mesh()
    chirp = np.exp(1j * np.pi * (U**2 + V**2) / lz)
    # sum P(x,y) exp(+j 2 pi (xu + yv)/(lambda z)) dx dy on the centered grid
    transform = (
        np.sqrt(grid.nx * grid.ny) * grid.dx * grid.dy * ifft2c(pupil.transparency)
    )
    h = (cfg.amplitude / lz) * chirp * transform
    return ComplexField(out_grid, h)


def form_image(obj: ComplexField, psf: ComplexField, magnification: float = 1.0) -> ComplexField:
    """Image of ``obj`` through a linear shift-invariant system with kernel ``psf``.

        I(u, v) = sum_xy h(u - M x, v - M y) * (1/M) * O(x, y) dx dy

    realized as an FFT convolution on the image grid.  For |M| = 1 the object
    grid must match the PSF grid (M = -1 reflects the object through the grid
    centre); for other magnifications the object is resampled onto the image
    grid by zero-order hold.  The convolution is circular, matching the
    periodic world of the FFT transforms used throughout.
    """
    if magnification == 0:
        raise ConfigError("magnification must be nonzero")
    M = float(magnification)
    grid = psf.grid
    if abs(abs(M) - 1.0) < 1e-12:
        if not obj.grid.same_geometry(grid):
            raise GridError(
                f"object grid {obj.grid.shape}@({obj.grid.dx:.3g},{obj.grid.dy:.3g}) "
                f"incompatible with psf grid {grid.shape}@({grid.dx:.3g},{grid.dy:.3g})"
            )
        scaled = obj.data if M > 0 else _point_reflect(obj.data)
        scale = grid.dx * grid.dy / M
    else:
        scaled = _resample_nearest(obj, grid, M)
        scale = grid.dx * grid.dy / M**3
    conv = np.sqrt(grid.nx * grid.ny) * ifft2c(fft2c(psf.data) * fft2c(scaled))
    return ComplexField(grid, conv * scale)


def _point_reflect(data: np.ndarray) -> np.ndarray:
    # x -> -x on an even centered grid is index i -> (2c - i) mod n
    return np.roll(data[::-1, ::-1], (1, 1), axis=(0, 1))


def _resample_nearest(obj: ComplexField, grid: GridSpec, M: float) -> np.ndarray:
    U, V = grid.mesh()
    gi = np.rint(U / M / obj.grid.dx).astype(int) + obj.grid.nx // 2
    gj = np.rint(V / M / obj.grid.dy).astype(int) + obj.grid.ny // 2
    inside = (gi >= 0) & (gi < obj.grid.nx) & (gj >= 0) & (gj < obj.grid.ny)
    out = np.zeros(grid.shape, dtype=np.complex128)
    out[inside] = obj.data[gi[inside], gj[inside]]
    return out


def angular_spectrum_propagate(
    f: ComplexField, distance: float, wavelength: float
) -> ComplexField:
    """Exact free-space transfer-function propagation over ``distance`` (m).

    Evanescent components are zeroed, which keeps the operator unitary on the
    propagating band; negative distances back-propagate, so (+d, -d) round
    trips are exact for band-limited fields.
    """
    if wavelength <= 0:
        raise ConfigError(f"wavelength must be > 0, got {wavelength}")
    if not np.isfinite(distance):
        raise ConfigError(f"distance must be finite, got {distance}")
    FX, FY = f.grid.fmesh()
    arg = 1.0 - (wavelength * FX) ** 2 - (wavelength * FY) ** 2
    propagating = arg > 0
    kz = np.sqrt(np.where(propagating, arg, 0.0))
    H = np.where(propagating, np.exp(2j * np.pi * (distance / wavelength) * kz), 0.0)
    return ComplexField(f.grid, ifft2c(H * fft2c(f.data)))


_ORACLE_MAX = 64


def dft_oracle(f: ComplexField, direction: str = "forward") -> ComplexField:
    """Direct-summation unitary DFT with the same centering as fft2c/ifft2c.

    Independent reference path for transform tests; refuses grids above
    64x64 because of its O(N^3)-per-axis cost.
    """
    nx, ny = f.grid.shape
    if nx > _ORACLE_MAX or ny > _ORACLE_MAX:
        raise OracleSizeError(f"oracle limited to {_ORACLE_MAX}x{_ORACLE_MAX}, got {nx}x{ny}")
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    sign = -1.0 if direction == "forward" else 1.0
    kx = np.arange(nx) - nx // 2
    ky = np.arange(ny) - ny // 2
    Ex = np.exp(sign * 2j * np.pi * np.outer(kx, kx) / nx) / np.sqrt(nx)
    Ey = np.exp(sign * 2j * np.pi * np.outer(ky, ky) / ny) / np.sqrt(ny)
    return ComplexField(f.grid, Ex @ f.data @ Ey.T)
