"""Hadamard-type matrices and their fast transforms."""
from typing import Literal

import numpy as np
from scipy import fft as sfft
from scipy import linalg as sla

from ..config import config
from ..errors import CapacityError, ShapeError, ValidationError
from .matrix import ComplexMatrix, MatrixLike, as_array

HadamardKind = Literal["sylvester", "dft"]
HADAMARD_KINDS = ("sylvester", "dft")


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def sylvester_hadamard(k: int) -> ComplexMatrix:
    """
    The k-fold Kronecker power of [[1, 1], [1, -1]].

    Args:
        k: Number of Kronecker factors, 0 <= k <= MAX_SYLVESTER_K

    Returns:
        2^k by 2^k matrix of +-1 entries with H H^T = 2^k I
    """
    if k < 0:
        raise ValidationError(f"k must be nonnegative, got {k}")
    if k > config.MAX_SYLVESTER_K:
        raise CapacityError(f"Sylvester order 2^{k} exceeds cap 2^{config.MAX_SYLVESTER_K}")
    signs = sla.hadamard(2**k, dtype=np.int8)
    # symmetry is checked on the int8 form, before widening to complex
    if not np.array_equal(signs, signs.T):
        raise ValidationError(f"Sylvester matrix of order 2^{k} is not symmetric")
    return ComplexMatrix.trusted(signs.astype(np.complex128), hermitian=True)


def dft_matrix(n: int) -> ComplexMatrix:
    """Unitary DFT: entry (i, j) = exp(-2 pi i (i-1)(j-1) / n) / sqrt(n)."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    if n > config.MAX_DENSE_DFT:
        raise CapacityError(f"dense DFT of size {n} exceeds cap {config.MAX_DENSE_DFT}")
    return ComplexMatrix(sla.dft(n, scale="sqrtn"))


def fwht_apply(v) -> np.ndarray:
    """
    Multiply by the unnormalized Sylvester matrix in O(N log N).

    ``v`` may be a vector or a matrix; the transform acts along axis 0.
    """
    x = np.array(v, dtype=np.complex128)
    n = x.shape[0] if x.ndim else 0
    if not is_power_of_two(n):
        raise ShapeError(f"FWHT length must be a power of two, got {n}")
    rest = x.shape[1:]
    h = 1
    while h < n:
        x = x.reshape((-1, 2, h) + rest)
        x = np.concatenate((x[:, :1] + x[:, 1:], x[:, :1] - x[:, 1:]), axis=1)
        h *= 2
    return x.reshape((n,) + rest)


def dft_apply(v) -> np.ndarray:
    """Multiply by ``dft_matrix(n)`` along axis 0 via an orthonormal FFT."""
    x = np.asarray(v, dtype=np.complex128)
    if x.ndim == 0 or x.shape[0] < 1:
        raise ShapeError("DFT input must be a nonempty vector or matrix")
    return sfft.fft(x, axis=0, norm="ortho")


def hadamard_matrix(kind: str, n: int) -> ComplexMatrix:
    """Unimodular Hadamard-type H of size n (Sylvester or sqrt(n) times the DFT)."""
    if kind == "sylvester":
        if not is_power_of_two(n):
            raise ValidationError(f"Sylvester Hadamard needs a power-of-two n, got {n}")
        return sylvester_hadamard(n.bit_length() - 1)
    if kind == "dft":
        return ComplexMatrix(dft_matrix(n).array * np.sqrt(n))
    raise ValidationError(f"unknown Hadamard kind {kind!r}; expected one of {HADAMARD_KINDS}")


def unitary_hadamard_apply(kind: str, m) -> np.ndarray:
    """Compute (H/sqrt(N)) @ m without forming H."""
    x = np.asarray(m, dtype=np.complex128)
    if kind == "sylvester":
        return fwht_apply(x) / np.sqrt(x.shape[0])
    if kind == "dft":
        return dft_apply(x)
    raise ValidationError(f"unknown Hadamard kind {kind!r}; expected one of {HADAMARD_KINDS}")


def validate_hadamard(matrix: MatrixLike) -> None:
    """Raise ValidationError unless |H(i,j)| = 1 and H/sqrt(N) is unitary."""
    h = as_array(matrix)
    n = h.shape[0]
    modulus_gap = float(np.max(np.abs(np.abs(h) - 1.0)))
    if modulus_gap > config.UNITARY_TOL:
        raise ValidationError(f"Hadamard entries must be unimodular (deviation {modulus_gap:.3e})")
    u = h / np.sqrt(n)
    # Frobenius norm bounds the operator norm from above.
    defect = float(np.linalg.norm(u @ u.conj().T - np.eye(n), "fro"))
    if defect > config.UNITARY_TOL:
        raise ValidationError(f"H/sqrt(N) is not unitary (defect {defect:.3e})")
