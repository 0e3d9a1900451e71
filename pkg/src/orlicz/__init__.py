"""Numerical toolkit for Orlicz spaces and their geometry."""
from .errors import (
    ConstructionError,
    DegenerateInputError,
    DomainError,
    NotInSpaceError,
    OrliczError,
    PreconditionError,
)
from .functions import (
    Capped,
    Condition,
    CriticalConstants,
    Dilated,
    ExpConjugate,
    ExpMinusOne,
    GrowthVerdict,
    Indicator,
    Linear,
    OrliczFunction,
    PiecewiseAnalytic,
    PiecewiseLinear,
    Power,
    ULogU,
    Verdict,
    appropriate_delta2,
    check_delta2,
    critical_constants,
    evaluate,
    from_descriptor,
    generalized_inverse,
    n_function_class,
    right_derivative,
)
from .measures import Counting, MeasureDescriptor, NonAtomic
from .conjugation import (
    ConjugatePair,
    NumericConjugate,
    biconjugate_check,
    conjugate,
    finiteness_duality,
    young_gap,
)
from .spaces import (
    NormReport,
    StepFunction,
    amemiya_norm,
    fundamental_function,
    l1_equivalence_constants,
    luxemburg_norm,
    modular,
    norm_report,
    orlicz_norm_dual,
    sequence_norm,
)
from .geometry import (
    ClassificationReport,
    SliceSpec,
    certify_witness,
    challenge_witness,
    check_renorming,
    classify,
    construct_witness,
    renorming_bounds,
    sigma_bound,
    slice_diameter_lower_bound,
    slice_membership,
    uniformly_non_l12_gap,
)
from .catalog import render_catalog, run_catalog
from .harness import RunConfig, SuiteResult, run_suite, run_verify

__version__ = "0.1.0"

__all__ = [
    "ConstructionError",
    "DegenerateInputError",
    "DomainError",
    "NotInSpaceError",
    "OrliczError",
    "PreconditionError",
    "Capped",
    "Condition",
    "CriticalConstants",
    "Dilated",
    "ExpConjugate",
    "ExpMinusOne",
    "GrowthVerdict",
    "Indicator",
    "Linear",
    "OrliczFunction",
    "PiecewiseAnalytic",
    "PiecewiseLinear",
    "Power",
    "ULogU",
    "Verdict",
    "appropriate_delta2",
    "check_delta2",
    "critical_constants",
    "evaluate",
    "from_descriptor",
    "generalized_inverse",
    "n_function_class",
    "right_derivative",
    "Counting",
    "MeasureDescriptor",
    "NonAtomic",
    "ConjugatePair",
    "NumericConjugate",
    "biconjugate_check",
    "conjugate",
    "finiteness_duality",
    "young_gap",
    "NormReport",
    "StepFunction",
    "amemiya_norm",
    "fundamental_function",
    "l1_equivalence_constants",
    "luxemburg_norm",
    "modular",
    "norm_report",
    "orlicz_norm_dual",
    "sequence_norm",
    "ClassificationReport",
    "SliceSpec",
    "certify_witness",
    "challenge_witness",
    "check_renorming",
    "classify",
    "construct_witness",
    "renorming_bounds",
    "sigma_bound",
    "slice_diameter_lower_bound",
    "slice_membership",
    "uniformly_non_l12_gap",
    "render_catalog",
    "run_catalog",
    "RunConfig",
    "SuiteResult",
    "run_suite",
    "run_verify",
]
