"""
Signed permutations, diagonal signs and signed transpositions.

A signed permutation W with sigma and eps has W(i, j) = eps_i [i = sigma(j)].
Indices are 0-based here. Products with dense matrices are index/sign gathers,
so conjugation costs O(N^2) rather than O(N^3).
"""
import itertools
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from ..config import config
from ..errors import CapacityError, ShapeError, ValidationError
from ..linalg.matrix import ComplexMatrix, MatrixLike, as_array
from .rng import SeededRng

RngLike = Union[SeededRng, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, SeededRng):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise ValidationError(f"expected a SeededRng or numpy Generator, got {type(rng).__name__}")


def _random_signs(n: int, generator: np.random.Generator) -> np.ndarray:
    return (1 - 2 * generator.integers(0, 2, size=n)).astype(np.int8)


@dataclass(frozen=True, eq=False)
class SignedPermutation:
    sigma: np.ndarray
    eps: np.ndarray

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=np.intp).ravel()
        eps = np.array(self.eps, dtype=np.int8).ravel()
        n = sigma.size
        if n < 1 or eps.size != n:
            raise ShapeError(f"sigma and eps must be nonempty and equally long ({n} vs {eps.size})")
        if not np.array_equal(np.sort(sigma), np.arange(n)):
            raise ValidationError("sigma is not a bijection of {0, ..., n-1}")
        if not np.all(np.abs(eps) == 1):
            raise ValidationError("signs must be exactly +1 or -1")
        sigma.flags.writeable = False
        eps.flags.writeable = False
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "eps", eps)

    @property
    def n(self) -> int:
        return self.sigma.size

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(np.arange(n), np.ones(n, dtype=np.int8))

    def key(self) -> tuple:
        return tuple(self.sigma.tolist()) + tuple(self.eps.tolist())

    def __eq__(self, other) -> bool:
        return isinstance(other, SignedPermutation) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def dense(self) -> np.ndarray:
        w = np.zeros((self.n, self.n), dtype=np.int64)
        w[self.sigma, np.arange(self.n)] = self.eps[self.sigma]
        return w

    def to_matrix(self) -> ComplexMatrix:
        return ComplexMatrix(self.dense())

    def inverse(self) -> "SignedPermutation":
        inv = np.empty_like(self.sigma)
        inv[self.sigma] = np.arange(self.n)
        return SignedPermutation(inv, self.eps[self.sigma])

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """The signed permutation of the product self @ other."""
        if other.n != self.n:
            raise ShapeError(f"cannot compose sizes {self.n} and {other.n}")
        inv = np.empty_like(self.sigma)
        inv[self.sigma] = np.arange(self.n)
        return SignedPermutation(self.sigma[other.sigma], self.eps * other.eps[inv])

    def left_multiply(self, matrix: MatrixLike) -> np.ndarray:
        """W @ M: row i is eps_i times row sigma^-1(i) of M."""
        m = as_array(matrix)
        inv = np.empty_like(self.sigma)
        inv[self.sigma] = np.arange(self.n)
        return self.eps[:, None] * m[inv, :]

    def right_multiply(self, matrix: MatrixLike) -> np.ndarray:
        """M @ W: column j is column sigma(j) of M times eps_sigma(j)."""
        m = as_array(matrix)
        return m[:, self.sigma] * self.eps[self.sigma][None, :]

    def conjugate(self, matrix: MatrixLike) -> np.ndarray:
        """W* M W."""
        m = as_array(matrix)
        s = self.eps[self.sigma].astype(np.float64)
        return np.outer(s, s) * m[np.ix_(self.sigma, self.sigma)]

    def conjugate_adjoint(self, matrix: MatrixLike) -> np.ndarray:
        """W M W*."""
        return self.inverse().conjugate(matrix)


@dataclass(frozen=True, eq=False)
class DiagonalSigns:
    signs: np.ndarray

    def __post_init__(self):
        signs = np.array(self.signs, dtype=np.int8).ravel()
        if signs.size < 1 or not np.all(np.abs(signs) == 1):
            raise ValidationError("diagonal signs must be a nonempty vector of +1/-1")
        signs.flags.writeable = False
        object.__setattr__(self, "signs", signs)

    @property
    def n(self) -> int:
        return self.signs.size

    def dense(self) -> np.ndarray:
        return np.diag(self.signs.astype(np.int64))

    def left_multiply(self, matrix: MatrixLike) -> np.ndarray:
        return self.signs[:, None] * as_array(matrix)


def sample_signed_permutation(n: int, rng: RngLike) -> SignedPermutation:
    """Uniform draw from the 2^n n! signed permutations (Fisher-Yates plus fair signs)."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    generator = as_generator(rng)
    sigma = generator.permutation(n)
    return SignedPermutation(sigma, _random_signs(n, generator))


def sample_permutation(n: int, rng: RngLike) -> SignedPermutation:
    """Uniform permutation with every sign +1."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    return SignedPermutation(as_generator(rng).permutation(n), np.ones(n, dtype=np.int8))


def sample_diagonal_signs(n: int, rng: RngLike) -> DiagonalSigns:
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    return DiagonalSigns(_random_signs(n, as_generator(rng)))


def all_signed_permutations(n: int) -> Iterator[SignedPermutation]:
    """Every element of the signed permutation group of size n, n <= MAX_GROUP_N."""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    if n > config.MAX_GROUP_N:
        raise CapacityError(f"group enumeration limited to n <= {config.MAX_GROUP_N}, got {n}")
    for sigma in itertools.permutations(range(n)):
        for eps in itertools.product((1, -1), repeat=n):
            yield SignedPermutation(np.array(sigma), np.array(eps))


@dataclass(frozen=True)
class SignedTransposition:
    """
    T = eps1 e_j e_k* + eps2 e_k e_j* + sum over other i of e_i e_i* when j != k,
    and eps1 e_j e_j* + sum over i != j of e_i e_i* when j == k.
    """

    n: int
    j: int
    k: int
    eps1: int
    eps2: int

    def __post_init__(self):
        if not (0 <= self.j < self.n and 0 <= self.k < self.n):
            raise ValidationError(f"positions ({self.j}, {self.k}) out of range for n={self.n}")
        if abs(self.eps1) != 1 or abs(self.eps2) != 1:
            raise ValidationError("transposition signs must be +1 or -1")

    def as_signed_permutation(self) -> SignedPermutation:
        sigma = np.arange(self.n)
        eps = np.ones(self.n, dtype=np.int8)
        if self.j == self.k:
            eps[self.j] = self.eps1
        else:
            # T(j, k) = eps1 means sigma(k) = j with eps_j = eps1
            sigma[self.k], sigma[self.j] = self.j, self.k
            eps[self.j], eps[self.k] = self.eps1, self.eps2
        return SignedPermutation(sigma, eps)

    def dense(self) -> np.ndarray:
        return self.as_signed_permutation().dense()


def draw_signed_transposition(n: int, rng: RngLike) -> SignedTransposition:
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    generator = as_generator(rng)
    j, k = (int(v) for v in generator.integers(0, n, size=2))
    eps1, eps2 = (int(v) for v in _random_signs(2, generator))
    return SignedTransposition(n, j, k, eps1, eps2)


def sample_signed_transposition(n: int, rng: RngLike) -> ComplexMatrix:
    """Dense form of a random signed transposition."""
    return ComplexMatrix(draw_signed_transposition(n, rng).dense())
