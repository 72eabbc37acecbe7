"""airyfilt: band-limited imaging simulation with phase-based sidelobe filtering.

Pipeline overview: a finite pupil produces a point spread function whose
sidelobes ring through every image (``propagation``); zone-plate coded
holograms encode incoherent objects and decode into complex fields
(``zoneplate``); sidelobe noise is then rejected sample-by-sample from the
phase of the decoded field (``pbnf``), and the result can be benchmarked
against Gaussian pupil apodization (``apodize``).
"""

from .errors import (
    AiryfiltError,
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
from .field import (
    ComplexField,
    GridSpec,
    ImagingConfig,
    LineProfile,
    field_energy,
    gen_object,
    letter_h_object,
    line_profile,
    make_field,
    phase_map,
    point_object,
    ring_object,
    text_object,
    two_point_object,
)
from .propagation import (
    PupilFunction,
    angular_spectrum_propagate,
    circular_pupil,
    dft_oracle,
    fft2c,
    form_image,
    fresnel_psf,
    ifft2c,
)
from .zoneplate import (
    Hologram,
    ZonePlateSpec,
    calibrate_base_phase,
    decode_hologram,
    encode_hologram,
    zone_plate_transmittance,
)
from .pbnf import (
    CurvatureSpec,
    FilterReport,
    PhaseFilterSpec,
    annulus_masks,
    apply_pbnf,
    expected_lobe_phase,
    filter_report,
    remove_curvature,
    residual_phase,
)
from .apodize import (
    ApodizerSpec,
    ComparisonRecord,
    QualityMetrics,
    compare_pipelines,
    gaussian_apodize,
    measure_fwhm,
    measure_quality,
)
from .demos import DEMO_NAMES, run_demo

__version__ = "0.1.0"
