"""Changepoint detection for the mean direction of toroidal and spherical data."""

from .circular import (
    AngularSeries,
    CurvedDispersion,
    InverseDispersion,
    area_covariance,
    center_angle,
    circular_mean,
    curved_dispersion,
    curved_variance,
    invert_dispersion,
    sgn,
)
from .cusum import (
    CusumResult,
    TestConfig,
    cusum,
    detect_changepoint,
    kolmogorov_cdf,
    kolmogorov_quantile,
    kolmogorov_sf,
    max_abs_statistic,
    q_sequence,
)
from .errors import (
    AngularDomainError,
    DegeneracyError,
    DegenerateVarianceError,
    SingularDispersionError,
    UndefinedMeanError,
)
from .geometry import (
    AngularPair,
    RegionAreas,
    SurfaceKind,
    SurfaceSpec,
    numeric_surface_area,
    proportionate_area,
    region_areas,
    sphere,
    square_of_angle,
    torus,
)
from .samplers import (
    CosineModelParams,
    FisherParams,
    SineModelParams,
    sample_fisher,
    sample_von_mises,
    sample_vm_cosine,
    sample_vm_sine,
)
from .segmentation import (
    ChangepointEntry,
    ChangepointReport,
    SegmentationConfig,
    SegmentSummary,
    binary_segment,
    segment_summaries,
)
from .simulation import (
    NullExperimentConfig,
    NullExperimentResult,
    PowerGridConfig,
    PowerGridResult,
    null_experiment,
    power_grid,
)
from .io import DataFormatError, DatasetSpec, emit_report, parse_angular_csv

__version__ = "0.1.0"
