"""Dense complex matrices, norms and the JSON dump format."""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from scipy import linalg as sla

from ..config import config
from ..errors import ShapeError, ValidationError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MatrixLike = Union["ComplexMatrix", np.ndarray]


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """
    An immutable n-by-n complex matrix.

    The ``hermitian`` tag is validated once, on construction, against
    ``config.HERMITIAN_TOL`` scaled by the largest entry.
    """

    array: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        arr = np.array(self.array, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ShapeError(f"expected a nonempty square matrix, got shape {arr.shape}")
        if self.hermitian:
            scale = max(1.0, float(np.max(np.abs(arr))))
            skew = float(np.max(np.abs(arr - arr.conj().T)))
            if skew > config.HERMITIAN_TOL * scale:
                raise ValidationError(f"matrix tagged Hermitian deviates by {skew:.3e}")
        arr.flags.writeable = False
        object.__setattr__(self, "array", arr)

    @property
    def n(self) -> int:
        return self.array.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Row-major entries, length n*n."""
        return self.array.ravel()

    @classmethod
    def from_entries(cls, n: int, entries: Sequence[complex], hermitian: bool = False) -> "ComplexMatrix":
        values = np.asarray(entries, dtype=np.complex128)
        if values.size != n * n:
            raise ShapeError(f"expected {n * n} entries for n={n}, got {values.size}")
        return cls(values.reshape(n, n), hermitian=hermitian)

    @classmethod
    def trusted(cls, array: np.ndarray, hermitian: bool = False) -> "ComplexMatrix":
        """
        Wrap a complex128 square array without copying it or re-checking the Hermitian tag.

        The array is frozen in place, so callers hand over ownership.
        """
        arr = np.asarray(array)
        if arr.dtype != np.complex128:
            raise ValidationError(f"trusted matrices must be complex128, got {arr.dtype}")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ShapeError(f"expected a nonempty square matrix, got shape {arr.shape}")
        arr.flags.writeable = False
        matrix = object.__new__(cls)
        object.__setattr__(matrix, "array", arr)
        object.__setattr__(matrix, "hermitian", hermitian)
        return matrix

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls(np.eye(n), hermitian=True)

    def trace(self) -> complex:
        return complex(np.trace(self.array))

    def adjoint(self) -> "ComplexMatrix":
        return ComplexMatrix(self.array.conj().T, hermitian=self.hermitian)

    def scaled(self, factor: complex) -> "ComplexMatrix":
        real = np.isreal(factor)
        return ComplexMatrix(self.array * factor, hermitian=self.hermitian and bool(real))

    def to_dict(self) -> dict:
        flat = self.entries
        interleaved = np.empty(2 * flat.size)
        interleaved[0::2] = flat.real
        interleaved[1::2] = flat.imag
        return {"n": self.n, "entries": interleaved.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str, hermitian: bool = False) -> "ComplexMatrix":
        payload = json.loads(text)
        try:
            n = int(payload["n"])
            interleaved = np.asarray(payload["entries"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"malformed matrix JSON: {e}") from e
        if interleaved.size != 2 * n * n:
            raise ShapeError(f"expected {2 * n * n} numbers for n={n}, got {interleaved.size}")
        return cls.from_entries(n, interleaved[0::2] + 1j * interleaved[1::2], hermitian=hermitian)


def as_array(matrix: MatrixLike) -> np.ndarray:
    """Plain complex ndarray view of a ComplexMatrix or array-like."""
    if isinstance(matrix, ComplexMatrix):
        return matrix.array
    return np.asarray(matrix, dtype=np.complex128)


def dump_matrix(matrix: ComplexMatrix, path: Union[str, Path]) -> Path:
    """Write ``matrix`` to ``path`` in the {n, entries:[re,im,...]} format."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(matrix.to_json())
    logger.info(f"Wrote {matrix.n}x{matrix.n} matrix to {target}")
    return target


@dataclass(frozen=True)
class MatrixNorms:
    operator_norm: float
    hs_norm: float
    trace: complex


def operator_norm(matrix: MatrixLike) -> float:
    """Largest singular value, from the Hermitian eigensolver applied to A*A."""
    a = as_array(matrix)
    gram = a.conj().T @ a
    top = sla.eigvalsh(gram, subset_by_index=[a.shape[0] - 1, a.shape[0] - 1])
    return float(np.sqrt(max(float(top[-1]), 0.0)))


def hs_norm(matrix: MatrixLike) -> float:
    """Hilbert-Schmidt norm (tr AA*)^(1/2)."""
    return float(np.linalg.norm(as_array(matrix), "fro"))


def matrix_norms(matrix: MatrixLike) -> MatrixNorms:
    a = as_array(matrix)
    return MatrixNorms(operator_norm(a), hs_norm(a), complex(np.trace(a)))
