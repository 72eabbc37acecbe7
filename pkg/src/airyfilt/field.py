"""Complex 2-D fields on physical grids, test objects, and basic field queries.

Conventions used everywhere in this package:

* a field is an ``(nx, ny)`` complex array ``data[i, j]``;
* sample ``(i, j)`` sits at the physical point ``((i - nx/2)*dx, (j - ny/2)*dy)``,
  so the grid centre (physical origin) is the sample ``(nx//2, ny//2)``;
* grids are even-sized so the centre sample is well defined under FFT shifts;
* all storage is double precision (complex128).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

import numpy as np

from .errors import GeometryError, GridError
from .font5x7 import GLYPHS

__all__ = [
    "GridSpec",
    "ComplexField",
    "ImagingConfig",
    "LineProfile",
    "make_field",
    "gen_object",
    "ring_object",
    "letter_h_object",
    "text_object",
    "point_object",
    "two_point_object",
    "line_profile",
    "field_energy",
    "phase_map",
    "default_amp_floor",
]


@dataclass(frozen=True)
class GridSpec:
    """Pixel counts and physical pitch of a sampling grid.

    ``source_pitch`` is optional provenance: single-FFT transforms produce a
    field whose pitch differs from the input plane, and record the input
    pitch here.
    """

    nx: int
    ny: int
    dx: float
    dy: float
    source_pitch: tuple[float, float] | None = None

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2 or self.nx % 2 or self.ny % 2:
            raise GridError(
                f"grid must be even-sized and at least 2x2, got {self.nx}x{self.ny}"
            )
        if not (self.dx > 0 and self.dy > 0):
            raise GridError(f"pixel pitch must be positive, got dx={self.dx}, dy={self.dy}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def center(self) -> tuple[int, int]:
        return (self.nx // 2, self.ny // 2)

    def x(self) -> np.ndarray:
        """Physical coordinates along the first (x) axis."""
        return (np.arange(self.nx) - self.nx // 2) * self.dx

    def y(self) -> np.ndarray:
        """Physical coordinates along the second (y) axis."""
        return (np.arange(self.ny) - self.ny // 2) * self.dy

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) coordinate arrays of shape (nx, ny)."""
        return np.meshgrid(self.x(), self.y(), indexing="ij")

    def fmesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Centered spatial-frequency arrays matching the centered FFT layout."""
        fx = (np.arange(self.nx) - self.nx // 2) / (self.nx * self.dx)
        fy = (np.arange(self.ny) - self.ny // 2) / (self.ny * self.dy)
        return np.meshgrid(fx, fy, indexing="ij")

    def same_geometry(self, other: "GridSpec", rtol: float = 1e-9) -> bool:
        """True when pixel counts match and pitches agree to ``rtol``."""
        return (
            self.nx == other.nx
            and self.ny == other.ny
            and abs(self.dx - other.dx) <= rtol * self.dx
            and abs(self.dy - other.dy) <= rtol * self.dy
        )


@dataclass
class ComplexField:
    """A complex amplitude distribution sampled on a :class:`GridSpec`."""

    grid: GridSpec
    data: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.complex128)
        if self.data.shape != self.grid.shape:
            raise GridError(
                f"data shape {self.data.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.data.view(np.float64))):
            raise GridError("field contains non-finite samples")

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def amplitude(self) -> np.ndarray:
        return np.abs(self.data)

    def intensity(self) -> np.ndarray:
        return np.abs(self.data) ** 2

    def with_data(self, data: np.ndarray) -> "ComplexField":
        """New field on the same grid."""
        return ComplexField(self.grid, data)


@dataclass(frozen=True)
class ImagingConfig:
    """Wavelength, propagation distance, magnification and amplitude constant."""

    wavelength: float
    distance: float
    magnification: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        from .errors import ConfigError

        if self.wavelength <= 0:
            raise ConfigError(f"wavelength must be > 0, got {self.wavelength}")
        if self.distance <= 0:
            raise ConfigError(f"distance must be > 0, got {self.distance}")
        if self.magnification == 0:
            raise ConfigError("magnification must be nonzero")
        if self.amplitude <= 0:
            raise ConfigError(f"amplitude must be > 0, got {self.amplitude}")

    @property
    def k(self) -> float:
        """Wavenumber 2*pi/lambda."""
        return 2.0 * np.pi / self.wavelength


class LineProfile(NamedTuple):
    """A 1-D intensity cut: physical positions (m) and |amplitude|^2 values."""

    position: np.ndarray
    intensity: np.ndarray


def make_field(grid: GridSpec, fill: complex = 0j) -> ComplexField:
    """Uniformly filled field."""
    return ComplexField(grid, np.full(grid.shape, fill, dtype=np.complex128))


def field_energy(f: ComplexField) -> float:
    """Total energy sum(|f|^2)*dx*dy."""
    return float(np.sum(np.abs(f.data) ** 2) * f.grid.dx * f.grid.dy)


def default_amp_floor(data: np.ndarray) -> float:
    """Amplitude below which phase is treated as numerically meaningless."""
    m = float(np.abs(data).max()) if data.size else 0.0
    return 1e-9 * m


def phase_map(f: ComplexField, amp_floor: float | None = None) -> np.ndarray:
    """Principal-value phase in (-pi, pi]; NaN where |f| <= amp_floor.

    ``amp_floor=None`` uses the default floor 1e-9 * max|f|.
    """
    if amp_floor is None:
        amp_floor = default_amp_floor(f.data)
    elif amp_floor < 0:
        raise ValueError(f"amp_floor must be >= 0, got {amp_floor}")
    amp = np.abs(f.data)
    ph = np.angle(f.data)
    # np.angle returns [-pi, pi]; fold the -pi edge onto +pi (principal value)
    ph = np.where(ph == -np.pi, np.pi, ph)
    return np.where(amp <= amp_floor, np.nan, ph)


def line_profile(f: ComplexField, axis: str, index: int) -> LineProfile:
    """Intensity along one grid line.

    ``axis="row"`` fixes the first index (a line of constant x, positions are
    y coordinates); ``axis="col"`` fixes the second index.
    """
    if axis == "row":
        if not 0 <= index < f.grid.nx:
            raise IndexError(f"row {index} out of range for nx={f.grid.nx}")
        return LineProfile(f.grid.y(), np.abs(f.data[index, :]) ** 2)
    if axis == "col":
        if not 0 <= index < f.grid.ny:
            raise IndexError(f"col {index} out of range for ny={f.grid.ny}")
        return LineProfile(f.grid.x(), np.abs(f.data[:, index]) ** 2)
    raise ValueError(f"axis must be 'row' or 'col', got {axis!r}")


# ---------------------------------------------------------------------------
# test objects (binary amplitude, zero phase)
# ---------------------------------------------------------------------------

def ring_object(grid: GridSpec, r_in: float, r_out: float) -> ComplexField:
    """Annulus r_in <= r <= r_out (meters); r_in = 0 gives a filled disk."""
    if not 0 <= r_in < r_out:
        raise GeometryError(f"need 0 <= r_in < r_out, got r_in={r_in}, r_out={r_out}")
    half_x = grid.nx // 2 * grid.dx
    half_y = grid.ny // 2 * grid.dy
    if r_out > min(half_x, half_y):
        raise GeometryError(
            f"ring radius {r_out} exceeds grid half-extent {min(half_x, half_y)}"
        )
    X, Y = grid.mesh()
    r = np.hypot(X, Y)
    mask = (r >= r_in) & (r <= r_out)
    return ComplexField(grid, mask.astype(np.complex128))


def point_object(grid: GridSpec, i: int, j: int) -> ComplexField:
    """Single unit-amplitude pixel at index (i, j)."""
    if not (0 <= i < grid.nx and 0 <= j < grid.ny):
        raise GeometryError(f"point ({i}, {j}) outside grid {grid.shape}")
    data = np.zeros(grid.shape, dtype=np.complex128)
    data[i, j] = 1.0
    return ComplexField(grid, data)


def two_point_object(grid: GridSpec, i1: int, j1: int, i2: int, j2: int) -> ComplexField:
    """Two unit-amplitude pixels."""
    f = point_object(grid, i1, j1)
    g = point_object(grid, i2, j2)
    return ComplexField(grid, np.maximum(f.data.real, g.data.real).astype(np.complex128))


def letter_h_object(grid: GridSpec, stroke: float) -> ComplexField:
    """Block letter H: two verticals and a crossbar, stroke width in meters.

    The letter is 5 strokes wide and 7 strokes tall, centered on the grid.
    """
    s = int(round(stroke / grid.dx))
    if s < 1:
        raise GeometryError(f"stroke {stroke} is below one pixel ({grid.dx})")
    w, h = 5 * s, 7 * s
    if w > grid.nx or h > grid.ny:
        raise GeometryError(f"letter {w}x{h} px does not fit grid {grid.shape}")
    data = np.zeros(grid.shape, dtype=np.complex128)
    ci, cj = grid.center
    i0 = ci - w // 2
    j0 = cj - h // 2
    data[i0 : i0 + s, j0 : j0 + h] = 1.0
    data[i0 + w - s : i0 + w, j0 : j0 + h] = 1.0
    data[i0 : i0 + w, cj - s // 2 : cj - s // 2 + s] = 1.0
    return ComplexField(grid, data)


def text_object(grid: GridSpec, text: str, scale: int = 4) -> ComplexField:
    """Rasterize ``text`` with the built-in 5x7 bitmap font, centered.

    ``scale`` is the integer pixel size of one font cell; glyphs are separated
    by one (scaled) blank column.
    """
    if scale < 1:
        raise GeometryError(f"scale must be >= 1, got {scale}")
    text = text.upper()
    unknown = sorted({ch for ch in text if ch not in GLYPHS})
    if unknown:
        raise GeometryError(f"no glyph for characters {unknown}")
    cols = len(text) * 6 - 1  # 5 columns per glyph + 1 gap
    w, h = cols * scale, 7 * scale
    if w > grid.nx or h > grid.ny:
        raise GeometryError(f"text {w}x{h} px does not fit grid {grid.shape}")
    bitmap = np.zeros((cols, 7), dtype=bool)
    for n, ch in enumerate(text):
        glyph = GLYPHS[ch]  # 7 rows of 5 chars, '#' = on
        for r, rowbits in enumerate(glyph):
            for c, bit in enumerate(rowbits):
                if bit == "#":
                    bitmap[n * 6 + c, r] = True
    big = np.kron(bitmap, np.ones((scale, scale), dtype=bool))
    data = np.zeros(grid.shape, dtype=np.complex128)
    ci, cj = grid.center
    i0 = ci - w // 2
    j0 = cj - h // 2
    # font rows run top-to-bottom; map them to decreasing y so text reads upright
    data[i0 : i0 + w, j0 : j0 + h] = big[:, ::-1]
    return ComplexField(grid, data)


def gen_object(kind: str, grid: GridSpec, **params) -> ComplexField:
    """Dispatch by object kind; used by the command line front end.

    Kinds: ``ring(r_in, r_out)``, ``letter_h(stroke)``, ``text(text, scale)``,
    ``point(i, j)``, ``two_point(i1, j1, i2, j2)``.
    """
    makers = {
        "ring": ring_object,
        "letter_h": letter_h_object,
        "text": text_object,
        "point": point_object,
        "two_point": two_point_object,
    }
    if kind not in makers:
        raise GeometryError(f"unknown object kind {kind!r}; choose from {sorted(makers)}")
    return makers[kind](grid, **params)
