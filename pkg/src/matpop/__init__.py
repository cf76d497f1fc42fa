"""Analysis toolkit for matrix population models x_k = (T + F) x_{k-1}.

Computes growth rates and net reproductive rates of standard matrix
population models, classifies growth against the trichotomy that couples
them, analyzes the zero-pattern structure of the projection and next
generation matrices, rescales fertility to hit a prescribed growth rate,
and simulates trajectories with their long-run limits.
"""

__version__ = "0.1.0"

from .errors import (
    ConsistencyError,
    ConvergenceError,
    Error,
    ModelError,
    MortalityError,
    NumericalError,
    ScalingError,
    StructureError,
)
from .matrices import as_matrix, as_population_vector
from .spectral import (
    CLAMP_TOL,
    MAX_ITERATIONS,
    SPECTRAL_TOL,
    SpectralPair,
    perron_pair,
    resolvent_inverse,
    spectral_radius,
)
from .structure import (
    COMPUTED_PATTERN_TOL,
    QPatternReport,
    StructureReport,
    analyze_structure,
    next_gen_pattern,
)
from .model import (
    CLASSIFY_TOL,
    STABILITY_TOL,
    AnalysisReport,
    PopulationModel,
    TargetScaleResult,
    Trichotomy,
    analyze,
    next_generation_matrix,
    r0_positive,
    stabilizing_scale,
    target_growth_scale,
    validate_model,
    wielandt_bracket,
)
from .leslie import LeslieModel, assemble, leslie_growth_rate, leslie_r0, q_poly_eval
from .dynamics import (
    AGREEMENT_TOL,
    LIMIT_TOL,
    Fate,
    LimitResult,
    PeriodicLimits,
    PopulationClass,
    PopulationKind,
    Trajectory,
    TrajectoryStep,
    classify_population,
    eventual_limit,
    iterate,
    periodic_limits,
)

__all__ = [
    "__version__",
    "AGREEMENT_TOL",
    "AnalysisReport",
    "CLAMP_TOL",
    "CLASSIFY_TOL",
    "COMPUTED_PATTERN_TOL",
    "ConsistencyError",
    "ConvergenceError",
    "Error",
    "Fate",
    "LIMIT_TOL",
    "LeslieModel",
    "LimitResult",
    "MAX_ITERATIONS",
    "ModelError",
    "MortalityError",
    "NumericalError",
    "PeriodicLimits",
    "PopulationClass",
    "PopulationKind",
    "PopulationModel",
    "QPatternReport",
    "SPECTRAL_TOL",
    "STABILITY_TOL",
    "ScalingError",
    "SpectralPair",
    "StructureError",
    "StructureReport",
    "TargetScaleResult",
    "Trajectory",
    "TrajectoryStep",
    "Trichotomy",
    "analyze",
    "analyze_structure",
    "as_matrix",
    "as_population_vector",
    "assemble",
    "classify_population",
    "eventual_limit",
    "iterate",
    "leslie_growth_rate",
    "leslie_r0",
    "next_gen_pattern",
    "next_generation_matrix",
    "periodic_limits",
    "perron_pair",
    "q_poly_eval",
    "r0_positive",
    "resolvent_inverse",
    "spectral_radius",
    "stabilizing_scale",
    "target_growth_scale",
    "validate_model",
    "wielandt_bracket",
]
