"""Moment-level free probability: mixed moments, free convolutions, compression law."""

from .compression import (
    CompressionLaw,
    compression_density,
    compression_law,
    compression_total_mass,
    law_moments_by_quadrature,
)
from .mixed import (
    FreeMomentCalculator,
    cyclic_reduce,
    free_additive_moments,
    free_mixed_moment,
    free_mixed_moment_by_centering,
    free_multiplicative_moments,
)
from .moments import AlternatingWord, MomentSequence

__all__ = [
    "AlternatingWord",
    "CompressionLaw",
    "FreeMomentCalculator",
    "MomentSequence",
    "compression_density",
    "compression_law",
    "compression_total_mass",
    "cyclic_reduce",
    "free_additive_moments",
    "free_mixed_moment",
    "free_mixed_moment_by_centering",
    "free_multiplicative_moments",
    "law_moments_by_quadrature",
]
