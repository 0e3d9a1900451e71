"""Witness points, slices and the property classifier."""
from .lemmas import RenormingCheck, check_renorming, renorming_bounds, sigma_bound
from .sequence import SequenceSpace
from .witness import (
    ChallengeRecord,
    DegenerateWitnessWarning,
    Witness,
    WitnessCertificate,
    certify_witness,
    challenge_witness,
    construct_witness,
)
from .slices import (
    DiameterEstimate,
    GapEstimate,
    SliceSpec,
    explicit_pair_diameter,
    slice_diameter_lower_bound,
    slice_membership,
    uniformly_non_l12_estimate,
    uniformly_non_l12_gap,
)
from .classify import FAILS, HOLDS, NOT_COVERED, ClassificationReport, PropertyVerdict, classify

__all__ = [
    "RenormingCheck",
    "check_renorming",
    "renorming_bounds",
    "sigma_bound",
    "SequenceSpace",
    "ChallengeRecord",
    "DegenerateWitnessWarning",
    "Witness",
    "WitnessCertificate",
    "certify_witness",
    "challenge_witness",
    "construct_witness",
    "DiameterEstimate",
    "GapEstimate",
    "SliceSpec",
    "explicit_pair_diameter",
    "slice_diameter_lower_bound",
    "slice_membership",
    "uniformly_non_l12_estimate",
    "uniformly_non_l12_gap",
    "FAILS",
    "HOLDS",
    "NOT_COVERED",
    "ClassificationReport",
    "PropertyVerdict",
    "classify",
]
