"""Moment sequences of compactly supported laws and alternating words."""
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional, Sequence, Tuple

import numpy as np

from ..config import config
from ..errors import ValidationError

# Hankel positivity is only checked on this many leading moments.
HANKEL_CHECK_ORDER = 12


def _min_eigenvalue(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(matrix)[0])


def _is_psd(matrix: np.ndarray) -> bool:
    if matrix.size == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(matrix))))
    return _min_eigenvalue(matrix) >= -config.PSD_TOL * scale


@dataclass(frozen=True)
class MomentSequence:
    """
    First K moments m_1..m_K of a compactly supported law (m_0 = 1 implicit).

    Construction checks that the Hankel matrices [m_(i+j)] are positive
    semidefinite, which every genuine law satisfies.
    """

    moments: Tuple[float, ...]
    radius_hint: Optional[float] = None
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        values = tuple(float(m) for m in self.moments)
        if not all(np.isfinite(values)):
            raise ValidationError("moments must be finite")
        object.__setattr__(self, "moments", values)
        if self.validate and not _is_psd(self.hankel()):
            raise ValidationError(f"moments {values[:HANKEL_CHECK_ORDER]} fail the Hankel positivity test")

    @property
    def order(self) -> int:
        return len(self.moments)

    def __len__(self) -> int:
        return len(self.moments)

    def __getitem__(self, k: int) -> float:
        """m_k, with m_0 = 1."""
        if k == 0:
            return 1.0
        if k < 0 or k > self.order:
            raise ValidationError(f"moment of order {k} requested but only {self.order} known")
        return self.moments[k - 1]

    def hankel(self, shift: int = 0) -> np.ndarray:
        padded = (1.0,) + self.moments[:HANKEL_CHECK_ORDER]
        size = (len(padded) - 1 - shift) // 2 + 1
        if size < 1:
            return np.zeros((0, 0))
        return np.array([[padded[i + j + shift] for j in range(size)] for i in range(size)])

    def is_nonnegative_law(self) -> bool:
        """Stieltjes test: both [m_(i+j)] and [m_(i+j+1)] positive semidefinite."""
        return _is_psd(self.hankel()) and _is_psd(self.hankel(shift=1))

    def truncated(self, order: int) -> "MomentSequence":
        if order > self.order:
            raise ValidationError(f"cannot extend a sequence of order {self.order} to {order}")
        return MomentSequence(self.moments[:order], self.radius_hint, validate=False)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.moments)

    @classmethod
    def from_atoms(cls, atoms: Sequence[float], weights: Sequence[float], order: int) -> "MomentSequence":
        points = np.asarray(atoms, dtype=float)
        mass = np.asarray(weights, dtype=float)
        if points.shape != mass.shape or np.any(mass < 0) or not np.isclose(mass.sum(), 1.0):
            raise ValidationError("atoms and weights must match and weights form a probability vector")
        values = [float(np.dot(mass, points**k)) for k in range(1, order + 1)]
        radius = float(np.max(np.abs(points))) if points.size else 0.0
        return cls(tuple(values), radius_hint=radius)

    @classmethod
    def point_mass(cls, x: float, order: int) -> "MomentSequence":
        return cls.from_atoms([x], [1.0], order)

    @classmethod
    def bernoulli(cls, p: float, order: int) -> "MomentSequence":
        """0/1 law with mass p at 1: the spectral law of a projection of trace p."""
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"Bernoulli parameter must lie in [0, 1], got {p}")
        return cls.from_atoms([0.0, 1.0], [1.0 - p, p], order)

    @classmethod
    def symmetric_bernoulli(cls, order: int) -> "MomentSequence":
        return cls.from_atoms([-1.0, 1.0], [0.5, 0.5], order)

    @classmethod
    def from_samples(cls, values: Iterable[float], order: int) -> "MomentSequence":
        """Moments of the empirical law of ``values``."""
        data = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float).ravel()
        if data.size == 0:
            raise ValidationError("cannot form empirical moments of an empty sample")
        powers = np.ones_like(data)
        result = []
        for _ in range(order):
            powers = powers * data
            result.append(float(powers.mean()))
        return cls(tuple(result), radius_hint=float(np.max(np.abs(data))), validate=False)


Letter = Tuple[Hashable, int]


@dataclass(frozen=True)
class AlternatingWord:
    """A product of powers a^p of free variables, adjacent labels distinct."""

    letters: Tuple[Letter, ...]

    def __post_init__(self):
        letters = tuple((label, int(power)) for label, power in self.letters)
        for label, power in letters:
            if power < 1:
                raise ValidationError(f"letter powers must be positive, got {power} for {label!r}")
        for (left, _), (right, _) in zip(letters, letters[1:]):
            if left == right:
                raise ValidationError(f"adjacent letters share the label {left!r}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def from_labels(cls, labels: Iterable[Hashable]) -> "AlternatingWord":
        """Collapse runs of equal labels into powers."""
        merged = []
        for label in labels:
            if merged and merged[-1][0] == label:
                merged[-1] = (label, merged[-1][1] + 1)
            else:
                merged.append((label, 1))
        return cls(tuple(merged))

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def degree(self) -> int:
        return sum(power for _, power in self.letters)

    def label_degrees(self) -> dict:
        degrees: dict = {}
        for label, power in self.letters:
            degrees[label] = degrees.get(label, 0) + power
        return degrees
