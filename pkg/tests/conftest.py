import numpy as np
import pytest

from airyfilt import GridSpec, ImagingConfig, circular_pupil, fresnel_psf

WAVELENGTH = 632.8e-9


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)


def unit_grid(n: int = 64) -> GridSpec:
    return GridSpec(n, n, 1.0, 1.0)


def random_field_data(rng, n: int = 32) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def rel_err(a: np.ndarray, b: np.ndarray) -> float:
    denom = np.abs(b).max()
    if denom == 0:
        return float(np.abs(a).max())
    return float(np.abs(a - b).max() / denom)


# Finely resolved Airy pattern: aperture 100 px across, first zero ~12.5 image
# pixels, used for geometry / lobe-phase / odd-reject tests.
AIRY_GRID = GridSpec(1024, 1024, 10e-6, 10e-6)
AIRY_DIAMETER = 1e-3
AIRY_CFG = ImagingConfig(wavelength=WAVELENGTH, distance=0.05)


@pytest.fixture(scope="session")
def airy_psf():
    pupil = circular_pupil(AIRY_GRID, AIRY_DIAMETER)
    return fresnel_psf(pupil, AIRY_CFG)


# Geometry tuned for the phase-window modes, which act on the raw (curvature
# retained) phase.  The within-lobe phase spread grows as kappa*s^2 with s the
# radius in units of lambda*z/D and kappa = pi*lambda*z/D^2.  kappa = 0.0455
# keeps the central lobe inside a 0.2 rad window while every sidelobe's arc
# stays outside it, and the first phase wrap onto a matching-parity lobe
# happens beyond the grid corner (s_corner = D/(sqrt(2) dx) ~ 14.5).
WINDOW_GRID = GridSpec(512, 512, 10e-6, 10e-6)
WINDOW_KAPPA = 0.0455
WINDOW_DIAMETER = 20.5 * WINDOW_GRID.dx
WINDOW_CFG = ImagingConfig(
    wavelength=WAVELENGTH,
    distance=WINDOW_KAPPA * WINDOW_DIAMETER**2 / np.pi / WAVELENGTH,
)


@pytest.fixture(scope="session")
def window_psf():
    pupil = circular_pupil(WINDOW_GRID, WINDOW_DIAMETER)
    return fresnel_psf(pupil, WINDOW_CFG)
