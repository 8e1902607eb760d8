"""Samplers for structured random unitaries and the statistics that test them."""

from .families import (
    UNITARY_KINDS,
    LiberatingFamily,
    fake_haar,
    family_pair_sampler,
    haar_unitary,
    liberating_family,
    normalized_hadamard,
    unitary_sampler,
)
from .laws import LAW_NAMES, DiagonalLaw
from .rng import SeededRng
from .signed import (
    DiagonalSigns,
    SignedPermutation,
    SignedTransposition,
    all_signed_permutations,
    as_generator,
    draw_signed_transposition,
    sample_diagonal_signs,
    sample_permutation,
    sample_signed_permutation,
    sample_signed_transposition,
)
from .statistics import (
    EntryMomentEstimate,
    InvarianceComparison,
    conjugation_invariance_statistic,
    entry_moment_statistic,
    khinchin_bound,
)

__all__ = [
    "LAW_NAMES",
    "UNITARY_KINDS",
    "DiagonalLaw",
    "DiagonalSigns",
    "EntryMomentEstimate",
    "InvarianceComparison",
    "LiberatingFamily",
    "SeededRng",
    "SignedPermutation",
    "SignedTransposition",
    "all_signed_permutations",
    "as_generator",
    "conjugation_invariance_statistic",
    "draw_signed_transposition",
    "entry_moment_statistic",
    "fake_haar",
    "family_pair_sampler",
    "haar_unitary",
    "khinchin_bound",
    "liberating_family",
    "normalized_hadamard",
    "sample_diagonal_signs",
    "sample_permutation",
    "sample_signed_permutation",
    "sample_signed_transposition",
    "unitary_sampler",
]
