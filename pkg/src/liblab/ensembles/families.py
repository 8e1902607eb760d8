"""Fake Haar unitaries, liberating families and the Haar baseline."""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import unitary_group

from ..errors import ValidationError
from ..linalg.hadamard import hadamard_matrix, validate_hadamard
from ..linalg.matrix import ComplexMatrix, MatrixLike, as_array
from ..utils.logger import get_logger
from .signed import (
    DiagonalSigns,
    RngLike,
    SignedPermutation,
    as_generator,
    sample_diagonal_signs,
    sample_permutation,
    sample_signed_permutation,
)

logger = get_logger(__name__)

UNITARY_KINDS = ("fake", "unsigned", "haar")

UnitarySampler = Callable[[np.random.Generator], np.ndarray]
FamilySampler = Callable[[np.random.Generator], Sequence[np.ndarray]]


@lru_cache(maxsize=16)
def normalized_hadamard(kind: str, n: int) -> np.ndarray:
    """Read-only H/sqrt(N) for a named Hadamard family."""
    h = hadamard_matrix(kind, n).array / np.sqrt(n)
    h.flags.writeable = False
    return h


def fake_haar(hadamard: MatrixLike, w: SignedPermutation) -> ComplexMatrix:
    """
    U = W* (H/sqrt(N)) W.

    Args:
        hadamard: Unimodular H with H/sqrt(N) unitary
        w: Signed permutation of matching size

    Returns:
        The unitary U
    """
    h = as_array(hadamard)
    if h.shape[0] != w.n:
        raise ValidationError(f"H has size {h.shape[0]} but W has size {w.n}")
    validate_hadamard(h)
    return ComplexMatrix(w.conjugate(h / np.sqrt(w.n)))


def haar_unitary(n: int, rng: RngLike) -> np.ndarray:
    """Haar-distributed unitary; comparison baseline only."""
    generator = as_generator(rng)
    if n == 1:
        # unitary_group needs dimension at least 2
        return np.exp(2j * np.pi * generator.random()).reshape(1, 1)
    return unitary_group.rvs(n, random_state=generator)


def unitary_sampler(kind: str, hadamard_kind: str, n: int) -> UnitarySampler:
    """
    Sampler for U in the sum/product/concentration experiments.

    ``fake`` draws W*(H/sqrt(N))W with a signed W, ``unsigned`` uses a plain
    permutation, ``haar`` ignores H.
    """
    if kind == "haar":
        return lambda generator: haar_unitary(n, generator)
    if kind not in ("fake", "unsigned"):
        raise ValidationError(f"unknown unitary kind {kind!r}; expected one of {UNITARY_KINDS}")
    h = normalized_hadamard(hadamard_kind, n)
    draw = sample_signed_permutation if kind == "fake" else sample_permutation

    def sample(generator: np.random.Generator) -> np.ndarray:
        return draw(n, generator).conjugate(h)

    return sample


@dataclass(frozen=True, eq=False)
class LiberatingFamily:
    """
    {W} together with {(H/sqrt(N)) W} and {D_i (H/sqrt(N)) W}, all sharing one W.
    """

    n: int
    w: SignedPermutation
    signs: Tuple[DiagonalSigns, ...]
    labels: Tuple[str, ...]
    members: Tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.members)

    def member(self, label: str) -> np.ndarray:
        try:
            return self.members[self.labels.index(label)]
        except ValueError:
            raise ValidationError(f"no family member labelled {label!r}") from None


def liberating_family(
    hadamard: MatrixLike,
    index_count: int,
    rng: RngLike,
    signs: Optional[Sequence[DiagonalSigns]] = None,
    validate: bool = True,
) -> LiberatingFamily:
    """
    Draw one member set of the liberating family built from H.

    Args:
        hadamard: Unimodular H with H/sqrt(N) unitary
        index_count: Number of D_i (H/sqrt(N)) W members
        rng: Random source; W is drawn first, then each D_i
        signs: Fixed D_i to use instead of random draws
        validate: Check the Hadamard property of H

    Returns:
        LiberatingFamily with labels W, HW, D1HW, ...
    """
    h = as_array(hadamard)
    n = h.shape[0]
    if index_count < 0:
        raise ValidationError(f"index_count must be nonnegative, got {index_count}")
    if validate:
        validate_hadamard(h)
    generator = as_generator(rng)
    w = sample_signed_permutation(n, generator)
    if signs is None:
        signs = tuple(sample_diagonal_signs(n, generator) for _ in range(index_count))
    elif len(signs) != index_count:
        raise ValidationError(f"expected {index_count} sign vectors, got {len(signs)}")
    hw = w.right_multiply(h / np.sqrt(n))
    members: List[np.ndarray] = [w.dense().astype(np.complex128), hw]
    labels = ["W", "HW"]
    for i, d in enumerate(signs, start=1):
        members.append(d.left_multiply(hw))
        labels.append(f"D{i}HW")
    logger.debug(f"Drew liberating family with {len(members)} members at n={n}")
    return LiberatingFamily(n, w, tuple(signs), tuple(labels), tuple(members))


def family_pair_sampler(
    hadamard: MatrixLike, labels: Tuple[str, str] = ("W", "HW"), index_count: int = 0
) -> FamilySampler:
    """Sampler returning the two labelled members of a fresh family per call."""
    h = as_array(hadamard)
    validate_hadamard(h)

    def sample(generator: np.random.Generator) -> List[np.ndarray]:
        family = liberating_family(h, index_count, generator, validate=False)
        return [family.member(label) for label in labels]

    return sample
