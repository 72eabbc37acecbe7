"""File formats: binary fields, PNG previews, CSV profiles and metrics records.

Binary field layout (little endian):

    magic   4 bytes   b"CFLD" (complex) or b"RFLD" (real-valued)
    nx, ny  uint32
    dx, dy  float64
    data    row-major float64; complex files interleave (re, im) per sample
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import GridError
from .field import ComplexField, GridSpec, LineProfile

MAGIC_COMPLEX = b"CFLD"
MAGIC_REAL = b"RFLD"
_HEADER = struct.Struct("<IIdd")


def save_field(path: str | Path, f: ComplexField) -> None:
    """Write a complex field."""
    _write(path, MAGIC_COMPLEX, f.grid, f.data.astype("<c16"))


def save_real_field(path: str | Path, grid: GridSpec, data: np.ndarray) -> None:
    """Write a real-valued record (e.g. a hologram) with the real flag set."""
    data = np.asarray(data, dtype="<f8")
    if data.shape != grid.shape:
        raise GridError(f"data shape {data.shape} does not match grid {grid.shape}")
    _write(path, MAGIC_REAL, grid, data)


def _write(path, magic, grid, data):
    with open(path, "wb") as fh:
        fh.write(magic)
        fh.write(_HEADER.pack(grid.nx, grid.ny, grid.dx, grid.dy))
        fh.write(data.tobytes(order="C"))


def load_field(path: str | Path) -> tuple[ComplexField, bool]:
    """Read a field file.

    Returns ``(field, is_real)``; real-valued files come back as a complex
    field with zero imaginary part and ``is_real=True``.
    """
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic not in (MAGIC_COMPLEX, MAGIC_REAL):
            raise GridError(f"{path}: not a field file (magic {magic!r})")
        nx, ny, dx, dy = _HEADER.unpack(fh.read(_HEADER.size))
        grid = GridSpec(nx, ny, dx, dy)
        raw = fh.read()
    if magic == MAGIC_COMPLEX:
        data = np.frombuffer(raw, dtype="<c16", count=nx * ny).reshape(nx, ny)
        return ComplexField(grid, data.copy()), False
    data = np.frombuffer(raw, dtype="<f8", count=nx * ny).reshape(nx, ny)
    return ComplexField(grid, data.astype(np.complex128)), True


def save_png(path: str | Path, values: np.ndarray) -> None:
    """8-bit grayscale PNG of ``values``, normalized to its maximum.

    Array axis 0 (x) maps to image columns, axis 1 (y) to image rows with y
    increasing upward.
    """
    v = np.asarray(values, dtype=np.float64)
    peak = v.max()
    img = np.zeros(v.shape, dtype=np.uint8) if peak <= 0 else \
        np.clip(np.round(255.0 * v / peak), 0, 255).astype(np.uint8)
    Image.fromarray(img.T[::-1, :], mode="L").save(path, format="PNG")


def save_profile_csv(path: str | Path, profile: LineProfile) -> None:
    """Two-column CSV: position_m, intensity."""
    lines = ["position_m,intensity"]
    for p, i in zip(profile.position, profile.intensity):
        lines.append(f"{p!r},{i!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def save_metrics(path: str | Path, record: dict) -> None:
    """Structured metrics record (JSON, stable key order)."""
    Path(path).write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")


def load_metrics(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
