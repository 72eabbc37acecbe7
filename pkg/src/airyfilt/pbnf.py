"""Phase-based rejection of diffraction sidelobe noise on complex fields.

The sidelobes of a band-limited impulse response differ from the central
(signal) lobe only in phase: lobe n sits pi*n away from the base phase, plus
a quadratic phase spread within each lobe.  Filtering is therefore a pointwise
accept/reject decision on the phase of each complex sample:

* ``odd-reject``   drop samples whose phasor opposes the base phase
                   (cos(psi) < 0) -- removes every odd-order lobe;
* ``base-only``    keep only samples within ``epsilon`` of the base phase --
                   removes all sidelobes;
* ``window``       keep a configurable phase interval -- admits a tunable
                   fraction of a lobe's internal phase spread.

Rejected samples are zeroed, never attenuated; samples whose amplitude is
below the floor carry no usable phase and pass through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import GridError, SpecError
from .field import ComplexField, default_amp_floor

__all__ = [
    "CurvatureSpec",
    "PhaseFilterSpec",
    "expected_lobe_phase",
    "remove_curvature",
    "residual_phase",
    "apply_pbnf",
    "FilterReport",
    "MaskStats",
    "filter_report",
    "annulus_masks",
]

MODES = ("odd-reject", "base-only", "window")


@dataclass(frozen=True)
class CurvatureSpec:
    """Quadratic phase to divide out: exp(j*pi*r^2/(lambda*z)) about ``origin``.

    ``z=inf`` is accepted and makes the correction the identity.
    """

    z: float
    wavelength: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (self.z > 0):  # rejects z <= 0 and NaN; +inf is fine
            raise SpecError(f"curvature distance must be > 0, got {self.z}")
        if self.wavelength <= 0:
            raise SpecError(f"curvature wavelength must be > 0, got {self.wavelength}")

    @property
    def coefficient(self) -> float:
        """pi/(lambda*z); zero in the flat (z=inf) limit."""
        return 0.0 if np.isinf(self.z) else np.pi / (self.wavelength * self.z)


@dataclass(frozen=True)
class PhaseFilterSpec:
    """Filter mode plus the phase geometry it measures against."""

    mode: str = "odd-reject"
    base_phase: float = np.pi / 2
    epsilon: float = 0.2
    window: tuple[float, float] | None = None
    curvature: CurvatureSpec | None = None
    amp_floor: float | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise SpecError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (-np.pi < self.base_phase <= np.pi):
            raise SpecError(f"base phase must lie in (-pi, pi], got {self.base_phase}")
        if self.mode == "base-only" and not self.epsilon > 0:
            raise SpecError(f"base-only needs epsilon > 0, got {self.epsilon}")
        if self.mode == "window":
            if self.window is None:
                raise SpecError("window mode needs a (lo, hi) phase interval")
            lo, hi = self.window
            if not (lo < hi and hi - lo <= 2 * np.pi):
                raise SpecError(
                    f"window needs lo < hi and a span of at most 2*pi, got ({lo}, {hi})"
                )
        if self.amp_floor is not None and self.amp_floor < 0:
            raise SpecError(f"amp_floor must be >= 0, got {self.amp_floor}")


def _wrap(phase):
    """Principal value in (-pi, pi]."""
    out = np.mod(phase + np.pi, 2 * np.pi) - np.pi
    return np.where(out == -np.pi, np.pi, out)


def expected_lobe_phase(n: int, u: float, v: float, spec: PhaseFilterSpec) -> float:
    """Unwrapped phase of lobe ``n`` at image point (u, v).

        phi_n = base + pi*n + pi/(z*lambda) * ((u - u0)^2 + (v - v0)^2)

    Analysis helper; the filter itself never needs the lobe index because the
    pi*n term reduces to a sign test on the curvature-corrected phasor.
    """
    if n < 0:
        raise SpecError(f"lobe index must be >= 0, got {n}")
    if spec.curvature is None:
        raise SpecError("expected_lobe_phase needs a curvature specification")
    u0, v0 = spec.curvature.origin
    r2 = (u - u0) ** 2 + (v - v0) ** 2
    return float(spec.base_phase + np.pi * n + spec.curvature.coefficient * r2)


def _curvature_phase(f: ComplexField, curv: CurvatureSpec) -> np.ndarray:
    U, V = f.grid.mesh()
    u0, v0 = curv.origin
    return curv.coefficient * ((U - u0) ** 2 + (V - v0) ** 2)


def remove_curvature(f: ComplexField, spec: PhaseFilterSpec) -> ComplexField:
    """Divide out the quadratic phase term (multiply by its conjugate phasor)."""
    if spec.curvature is None:
        raise SpecError("remove_curvature needs a curvature specification")
    phase = _curvature_phase(f, spec.curvature)
    return ComplexField(f.grid, f.data * np.exp(-1j * phase))


def _resolve_floor(spec: PhaseFilterSpec, data: np.ndarray) -> float:
    return default_amp_floor(data) if spec.amp_floor is None else spec.amp_floor


def residual_phase(f: ComplexField, spec: PhaseFilterSpec) -> np.ndarray:
    """Phase relative to the base phase, curvature-corrected when configured.

    Returns principal values in (-pi, pi]; samples at or below the amplitude
    floor are NaN (no usable phase).
    """
    g = remove_curvature(f, spec).data if spec.curvature is not None else f.data
    psi = _wrap(np.angle(g) - spec.base_phase)
    amp = np.abs(f.data)
    return np.where(amp <= _resolve_floor(spec, f.data), np.nan, psi)


def apply_pbnf(f: ComplexField, spec: PhaseFilterSpec) -> ComplexField:
    """Accept or reject every sample by its residual phase.

    Kept samples are copied through bit-exactly, rejected samples become 0,
    and samples below the amplitude floor always pass through.  The decision
    is pointwise, so the filter is idempotent and commutes with positive
    rescaling of the field.
    """
    g = remove_curvature(f, spec).data if spec.curvature is not None else f.data
    psi = _wrap(np.angle(g) - spec.base_phase)
    if spec.mode == "odd-reject":
        keep = np.cos(psi) >= 0
    elif spec.mode == "base-only":
        keep = np.abs(psi) <= spec.epsilon
    else:
        lo, hi = spec.window
        keep = np.mod(psi - lo, 2 * np.pi) <= (hi - lo)
    keep |= np.abs(f.data) <= _resolve_floor(spec, f.data)
    return ComplexField(f.grid, np.where(keep, f.data, 0))


@dataclass(frozen=True)
class MaskStats:
    energy_before: float
    energy_after: float

    @property
    def ratio(self) -> float:
        return self.energy_after / self.energy_before if self.energy_before > 0 else 0.0


@dataclass(frozen=True)
class FilterReport:
    """Energy bookkeeping for a filtering step."""

    masks: dict[str, MaskStats]
    peak_before: float
    peak_after: float
    rejection_fraction: float

    def as_dict(self) -> dict:
        return {
            "peak_before": self.peak_before,
            "peak_after": self.peak_after,
            "rejection_fraction": self.rejection_fraction,
            "masks": {
                name: {
                    "energy_before": st.energy_before,
                    "energy_after": st.energy_after,
                    "ratio": st.ratio,
                }
                for name, st in self.masks.items()
            },
        }


def filter_report(
    before: ComplexField, after: ComplexField, masks: dict[str, np.ndarray]
) -> FilterReport:
    """Per-mask energies, peak intensities, and the fraction of zeroed samples."""
    if not before.grid.same_geometry(after.grid):
        raise GridError("before/after grids do not match")
    ib = np.abs(before.data) ** 2
    ia = np.abs(after.data) ** 2
    cell = before.grid.dx * before.grid.dy
    stats = {}
    for name, mask in masks.items():
        if mask.shape != before.data.shape:
            raise GridError(f"mask {name!r} shape {mask.shape} does not match field")
        stats[name] = MaskStats(float(ib[mask].sum() * cell), float(ia[mask].sum() * cell))
    nonzero = before.data != 0
    zeroed = nonzero & (after.data == 0)
    rejection = float(zeroed.sum() / nonzero.sum()) if nonzero.any() else 0.0
    return FilterReport(stats, float(ib.max()), float(ia.max()), rejection)


def annulus_masks(
    f: ComplexField, radii: np.ndarray, center: tuple[float, float] = (0.0, 0.0)
) -> dict[str, np.ndarray]:
    """Boolean lobe masks from a sorted list of boundary radii (meters).

    ``lobe0`` is the disk inside ``radii[0]``; ``lobe{n}`` the annulus between
    consecutive radii.
    """
    X, Y = f.grid.mesh()
    r = np.hypot(X - center[0], Y - center[1])
    masks = {"lobe0": r < radii[0]}
    for n in range(len(radii) - 1):
        masks[f"lobe{n + 1}"] = (r >= radii[n]) & (r < radii[n + 1])
    return masks
