"""Cavity-mediated collective spin squeezing.

Simulates a laser-driven atomic ensemble dispersively coupled to a lossy
optical cavity: per-branch coherent fields, traced-environment phase
factors, banded Dicke-basis reduction to spin moments, closed-form analytic
limits, and optimization over drive strength, duration, and detuning.
"""

from .analytic_models import (
    IdealModelInput,
    IdealOptimum,
    ScatterModelInput,
    ScatterOptimum,
    ValidityReport,
    detuning_bounds,
    ideal_optimum,
    scatter_optimum,
    validity,
    xi2_ideal,
    xi2_scatter,
    xi2_scatter_asymptotic,
)
from .cavity_field import (
    BranchField,
    DriveParams,
    PhaseBand,
    PhysicalRates,
    build_phase_band,
    coherent_overlap,
    phase_analytic,
    phase_numeric,
    steady_field,
    transient_field,
)
from .collective_spin import (
    CssAmplitudes,
    EnsembleSpec,
    MomentSet,
    SqueezeReport,
    ladder_element,
    make_css,
    moments_from_band,
    squeezing_parameter,
)
from .dynamics import (
    ShearingPoint,
    TrajectoryResult,
    evolve,
    shearing_strength,
    sweep_trajectory,
    time_for_shearing,
)
from .errors import (
    BelowRegimeError,
    CavsqError,
    ComplexDiscriminantError,
    ConfigError,
    DegenerateDirectionError,
    IncompleteBandError,
    InvalidSpecError,
    NoFiniteTimeError,
    NoMinimumError,
    NumericFailureError,
    RegimeWarning,
)
from .optimize import (
    OptimizeResult,
    ScalingFit,
    exact_minimum,
    minimize_1d,
    optimal_over_detuning,
    scaling_fit,
)

__version__ = "0.1.0"

__all__ = [
    "BelowRegimeError",
    "BranchField",
    "CavsqError",
    "ComplexDiscriminantError",
    "ConfigError",
    "CssAmplitudes",
    "DegenerateDirectionError",
    "DriveParams",
    "EnsembleSpec",
    "IdealModelInput",
    "IdealOptimum",
    "IncompleteBandError",
    "InvalidSpecError",
    "MomentSet",
    "NoFiniteTimeError",
    "NoMinimumError",
    "NumericFailureError",
    "OptimizeResult",
    "PhaseBand",
    "PhysicalRates",
    "RegimeWarning",
    "ScalingFit",
    "ScatterModelInput",
    "ScatterOptimum",
    "ShearingPoint",
    "SqueezeReport",
    "TrajectoryResult",
    "ValidityReport",
    "build_phase_band",
    "coherent_overlap",
    "detuning_bounds",
    "evolve",
    "exact_minimum",
    "ideal_optimum",
    "ladder_element",
    "make_css",
    "minimize_1d",
    "moments_from_band",
    "optimal_over_detuning",
    "phase_analytic",
    "phase_numeric",
    "scaling_fit",
    "scatter_optimum",
    "shearing_strength",
    "squeezing_parameter",
    "steady_field",
    "sweep_trajectory",
    "time_for_shearing",
    "transient_field",
    "validity",
    "xi2_ideal",
    "xi2_scatter",
    "xi2_scatter_asymptotic",
]
