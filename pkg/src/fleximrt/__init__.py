"""Sample size toolkit for micro-randomized trials whose intervention
categories may be added on a pre-planned schedule during the study."""

__version__ = "0.1.0"

from .design import (
    AvailabilityProfile,
    BaselineBasis,
    CategorySchedule,
    DesignSpec,
    DesignValidationError,
    RandomizationPlan,
    Violation,
    build_uniform_plan,
    validate_design,
)
from .information import (
    InformationMatrix,
    TestKind,
    TestStatistic,
    build_information_matrix,
    formulated_coverage,
    formulated_power,
    noncentrality,
    precision_bound,
)
from .simulation import (
    ErrorModel,
    McResult,
    ScenarioConfig,
    TruthSpec,
    generate_dataset,
    run_replicate,
    run_study,
)
from .sizing import (
    SizingMethod,
    SizingRequest,
    SizingResult,
    evaluate_at_n,
    solve_sample_size,
    solve_sample_size_power,
    solve_sample_size_precision,
)
from .trends import (
    TrendCoefficients,
    TrendSpec,
    basis_vector,
    solve_coefficients,
    summarize_effect,
)

__all__ = [
    "AvailabilityProfile",
    "BaselineBasis",
    "CategorySchedule",
    "DesignSpec",
    "DesignValidationError",
    "ErrorModel",
    "InformationMatrix",
    "McResult",
    "RandomizationPlan",
    "ScenarioConfig",
    "SizingMethod",
    "SizingRequest",
    "SizingResult",
    "TestKind",
    "TestStatistic",
    "TrendCoefficients",
    "TrendSpec",
    "TruthSpec",
    "Violation",
    "basis_vector",
    "build_information_matrix",
    "build_uniform_plan",
    "evaluate_at_n",
    "formulated_coverage",
    "formulated_power",
    "generate_dataset",
    "noncentrality",
    "precision_bound",
    "run_replicate",
    "run_study",
    "solve_coefficients",
    "solve_sample_size",
    "solve_sample_size_power",
    "solve_sample_size_precision",
    "summarize_effect",
    "validate_design",
]
