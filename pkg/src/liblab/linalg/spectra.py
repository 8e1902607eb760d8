"""Hermitian spectra and empirical distribution functions."""
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy import linalg as sla

from ..config import config
from ..errors import ShapeError, ValidationError
from .matrix import ComplexMatrix, MatrixLike, as_array


@dataclass(frozen=True, eq=False)
class SpectralSample:
    """Sorted real eigenvalues of a Hermitian matrix."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        values = np.array(self.eigenvalues, dtype=float).ravel()
        if values.size and np.any(np.diff(values) < 0):
            raise ValidationError("eigenvalues must be sorted nondecreasing")
        values.flags.writeable = False
        object.__setattr__(self, "eigenvalues", values)

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def edf(self, x):
        return edf_eval(self, x)


def _hermitian_array(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, ComplexMatrix) and matrix.hermitian:
        return matrix.array
    return ComplexMatrix(as_array(matrix), hermitian=True).array


def hermitian_eigenvalues(
    matrix: MatrixLike, eigenvectors: bool = False
) -> Union[SpectralSample, Tuple[SpectralSample, np.ndarray]]:
    """
    Eigenvalues of a Hermitian matrix, sorted nondecreasing.

    Args:
        matrix: Hermitian input; untagged inputs are validated here
        eigenvectors: Also return the unitary Q with A = Q diag(eigs) Q*

    Returns:
        SpectralSample, or (SpectralSample, Q) when eigenvectors is set
    """
    a = _hermitian_array(matrix)
    if eigenvectors:
        values, vectors = sla.eigh(a)
        return SpectralSample(values), vectors
    return SpectralSample(sla.eigvalsh(a))


def edf_eval(sample: SpectralSample, x):
    """F(x) = #{i : lambda_i <= x} / n, right-continuous."""
    counts = np.searchsorted(sample.eigenvalues, x, side="right")
    if np.ndim(counts) == 0:
        return float(counts) / sample.n
    return counts / sample.n


def numerical_rank(matrix: MatrixLike, rel_tol: Optional[float] = None) -> int:
    """Number of |eigenvalues| above rel_tol times the largest, for Hermitian input."""
    rel_tol = config.RANK_TOL if rel_tol is None else rel_tol
    magnitudes = np.abs(sla.eigvalsh(_hermitian_array(matrix)))
    top = float(magnitudes.max())
    if top == 0.0:
        return 0
    return int(np.count_nonzero(magnitudes > rel_tol * top))


class EdfDistance(NamedTuple):
    count: int
    fraction: float


def edf_distance(first: SpectralSample, second: SpectralSample) -> EdfDistance:
    """Exact sup-norm distance between two EDFs of equal size."""
    if first.n != second.n:
        raise ShapeError(f"spectra differ in size: {first.n} vs {second.n}")
    points = np.concatenate((first.eigenvalues, second.eigenvalues))
    gap = np.abs(
        np.searchsorted(first.eigenvalues, points, side="right")
        - np.searchsorted(second.eigenvalues, points, side="right")
    )
    count = int(gap.max()) if gap.size else 0
    return EdfDistance(count, count / first.n if first.n else 0.0)
