"""Verification reports and trace-zero inputs."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import config
from ..ensembles.signed import RngLike, as_generator
from ..errors import ShapeError, ValidationError
from ..linalg.matrix import ComplexMatrix, MatrixLike, as_array, hs_norm, operator_norm

NORMALIZATIONS = (None, "operator", "hs")


@dataclass
class VerificationReport:
    """
    Outcome of one verifier run.

    ``passed`` holds only when every checked instance satisfied its identity
    or inequality; ``details`` keeps one record per instance.
    """

    name: str
    instances_checked: int = 0
    max_ratio: float = 0.0
    bound_used: Optional[float] = None
    passed: bool = True
    details: List[dict] = field(default_factory=list)

    def record(self, ok: bool, ratio: Optional[float] = None, **detail) -> None:
        self.instances_checked += 1
        if ratio is not None and np.isfinite(ratio):
            self.max_ratio = max(self.max_ratio, float(ratio))
        self.passed = self.passed and bool(ok)
        entry = {"passed": bool(ok)}
        if ratio is not None:
            entry["ratio"] = float(ratio)
        entry.update(detail)
        self.details.append(entry)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.instances_checked += other.instances_checked
        self.max_ratio = max(self.max_ratio, other.max_ratio)
        self.passed = self.passed and other.passed
        self.details.extend(other.details)
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "instances_checked": self.instances_checked,
            "max_ratio": self.max_ratio,
            "bound_used": self.bound_used,
            "passed": self.passed,
            "details": self.details,
        }


@dataclass(frozen=True, eq=False)
class TraceZeroMatrixSet:
    """A_1, ..., A_ell of one size, each with |tr A| within tolerance of zero."""

    matrices: Tuple[ComplexMatrix, ...]

    def __post_init__(self):
        matrices = tuple(m if isinstance(m, ComplexMatrix) else ComplexMatrix(m) for m in self.matrices)
        if not matrices:
            raise ValidationError("need at least one matrix")
        n = matrices[0].n
        for index, m in enumerate(matrices, start=1):
            if m.n != n:
                raise ShapeError(f"A_{index} has size {m.n}, expected {n}")
            tol = config.TRACE_TOL * n * max(1.0, float(np.abs(m.array).max()))
            if abs(m.trace()) > tol:
                raise ValidationError(f"A_{index} has trace {m.trace():.3e}, expected zero")
        object.__setattr__(self, "matrices", matrices)

    @classmethod
    def of(cls, matrices: Sequence[MatrixLike]) -> "TraceZeroMatrixSet":
        if isinstance(matrices, TraceZeroMatrixSet):
            return matrices
        return cls(tuple(ComplexMatrix(as_array(m)) for m in matrices))

    @property
    def n(self) -> int:
        return self.matrices[0].n

    @property
    def ell(self) -> int:
        return len(self.matrices)

    def arrays(self) -> List[np.ndarray]:
        return [m.array for m in self.matrices]

    def hs_product(self) -> float:
        return float(np.prod([hs_norm(m) for m in self.matrices]))

    def scaled(self, index: int, factor: complex) -> "TraceZeroMatrixSet":
        """Copy with A_index (0-based) multiplied by ``factor``."""
        matrices = list(self.matrices)
        matrices[index] = matrices[index].scaled(factor)
        return TraceZeroMatrixSet(tuple(matrices))


def random_trace_zero(
    n: int, rng: RngLike, hermitian: bool = False, normalize: Optional[str] = None
) -> ComplexMatrix:
    """
    Standard complex Gaussian entries, optionally Hermitized, minus (tr/n) I.

    Args:
        n: Matrix size
        rng: Random source
        hermitian: Replace G by (G + G*)/2
        normalize: None, ``operator`` or ``hs`` to rescale to unit norm
    """
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    if normalize not in NORMALIZATIONS:
        raise ValidationError(f"unknown normalization {normalize!r}; expected one of {NORMALIZATIONS}")
    generator = as_generator(rng)
    g = (generator.standard_normal((n, n)) + 1j * generator.standard_normal((n, n))) / np.sqrt(2.0)
    if hermitian:
        g = (g + g.conj().T) / 2.0
    g = g - (np.trace(g) / n) * np.eye(n)
    if normalize is not None:
        size = operator_norm(g) if normalize == "operator" else hs_norm(g)
        if size > 0:
            g = g / size
    return ComplexMatrix(g, hermitian=hermitian)
