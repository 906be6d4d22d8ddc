"""Information and disturbance measures of quantum measurements.

Everything is a function of the singular values of a single measurement
operator (or of a set of them forming a complete measurement): the
information gain I, estimation fidelity G, operation fidelity F, physical
reversibility R and outcome probability p.  On top of the point measures
the package maps allowed regions and their boundaries on the four
information-disturbance planes, builds optimal measurements, and verifies
the first-order optimality conditions numerically.
"""

from .errors import (
    CurvatureUnreliableError,
    FamilyError,
    IncompleteMeasurementError,
    NoTangentPointError,
    QmidError,
    SpectrumError,
    SweepError,
    UndefinedEfficiencyError,
)
from .families import family_curve_batch, info_gain_projective
from .kkt import KKTReport, euler_residual, kkt_report, numeric_gradient
from .measurement import (
    AveragedMeasures,
    DiagonalOperator,
    Measurement,
    Particle,
    average_measures,
    center_of_mass,
    classify_optimality,
    construct_measurement,
    extract_particles,
    isotropic_measurement,
    optimal_IF,
    optimal_IR,
)
from .measures import (
    MeasureVector,
    efficiency,
    estimation_fidelity,
    info_bound,
    info_gain,
    info_gain_batch,
    measures,
    measures_batch,
    operation_fidelity,
    outcome_probability,
    reversibility,
)
from .oracle import OracleEstimate, mc_measures, quad_info_gain_d2, sample_simplex
from .region import (
    PlaneKind,
    Polyline,
    RegionPoint,
    TangentReport,
    averaged_region,
    boundary_polyline,
    curvature_sign,
    efficiency_argmax,
    lower_boundaries,
    projector_point,
    sweep_region,
    tangent_point,
    upper_boundary,
)
from .spectra import AuxiliaryScalars, Spectrum, auxiliary_scalars, canonicalize, random_spectra

__version__ = "1.0.0"

__all__ = [
    "AuxiliaryScalars",
    "AveragedMeasures",
    "CurvatureUnreliableError",
    "DiagonalOperator",
    "FamilyError",
    "IncompleteMeasurementError",
    "KKTReport",
    "Measurement",
    "MeasureVector",
    "NoTangentPointError",
    "OracleEstimate",
    "Particle",
    "PlaneKind",
    "Polyline",
    "QmidError",
    "RegionPoint",
    "Spectrum",
    "SpectrumError",
    "SweepError",
    "TangentReport",
    "UndefinedEfficiencyError",
    "average_measures",
    "averaged_region",
    "auxiliary_scalars",
    "boundary_polyline",
    "canonicalize",
    "center_of_mass",
    "classify_optimality",
    "construct_measurement",
    "curvature_sign",
    "efficiency",
    "efficiency_argmax",
    "estimation_fidelity",
    "euler_residual",
    "extract_particles",
    "family_curve_batch",
    "info_bound",
    "info_gain",
    "info_gain_batch",
    "info_gain_projective",
    "isotropic_measurement",
    "kkt_report",
    "lower_boundaries",
    "mc_measures",
    "measures",
    "measures_batch",
    "numeric_gradient",
    "operation_fidelity",
    "optimal_IF",
    "optimal_IR",
    "outcome_probability",
    "projector_point",
    "quad_info_gain_d2",
    "random_spectra",
    "reversibility",
    "sample_simplex",
    "sweep_region",
    "tangent_point",
    "upper_boundary",
]
