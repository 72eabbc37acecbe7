"""Exception types shared across the package."""


class AiryfiltError(Exception):
    """Base class for all package-specific errors."""


class GridError(AiryfiltError):
    """Invalid grid geometry, or grids that do not match."""


class GeometryError(AiryfiltError):
    """Object shape does not fit inside the grid."""


class ConfigError(AiryfiltError):
    """Invalid physical configuration (wavelength, distance, magnification...)."""


class SamplingError(AiryfiltError):
    """A sampling / anti-aliasing bound is violated.

    Messages state the violated bound numerically.
    """


class SpecError(AiryfiltError):
    """Invalid filter or apodizer specification."""


class CalibrationError(AiryfiltError):
    """Phase calibration requested at a point with no usable amplitude."""


class OracleSizeError(AiryfiltError):
    """Direct-summation transform requested on a grid too large for O(N^4) cost."""


class NoHalfCrossingError(AiryfiltError):
    """A profile has no half-maximum crossing on one or both sides of its peak."""


class DemoCheckError(AiryfiltError):
    """A bundled demo pipeline failed one of its built-in consistency checks."""
