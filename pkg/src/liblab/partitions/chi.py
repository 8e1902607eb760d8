"""
Partitions without singletons, forbidden doubletons and clump equivalence.

On a ground set of size 2*ell the forbidden doubletons are {2k-1, 2k} for
k = 1..ell. Clump(P) is the union of the blocks of P that are not forbidden
doubletons; two tuples are clump-equivalent when they generate the same
partition and agree on its clump.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, List, Tuple

import numpy as np

from ..config import config
from ..ensembles.signed import RngLike, as_generator
from ..errors import CapacityError, ShapeError, ValidationError
from ..utils.logger import get_logger
from .lattice import SetPartition, _values, all_partitions, partition_of_tuple

logger = get_logger(__name__)


def _require_even(ell: int) -> None:
    if ell % 2:
        raise ShapeError(f"ground set must have even size, got {ell}")


def forbidden_doubletons(two_ell: int) -> Tuple[FrozenSet[int], ...]:
    _require_even(two_ell)
    return tuple(frozenset((2 * k - 1, 2 * k)) for k in range(1, two_ell // 2 + 1))


def in_part_chi(p: SetPartition) -> bool:
    """No singleton blocks."""
    return all(size > 1 for size in p.block_sizes())


def in_part_chichi(p: SetPartition) -> bool:
    """No singleton blocks and no block equal to a forbidden doubleton."""
    _require_even(p.ell)
    forbidden = set(forbidden_doubletons(p.ell))
    return in_part_chi(p) and not any(block in forbidden for block in p.blocks())


def clump(p: SetPartition) -> FrozenSet[int]:
    _require_even(p.ell)
    forbidden = set(forbidden_doubletons(p.ell))
    return frozenset().union(*(b for b in p.blocks() if b not in forbidden))


def clump_equivalent(s, t) -> bool:
    s_values, t_values = _values(s), _values(t)
    if len(s_values) != len(t_values):
        raise ShapeError(f"tuples differ in length: {len(s_values)} vs {len(t_values)}")
    _require_even(len(s_values))
    p = partition_of_tuple(s_values)
    if p != partition_of_tuple(t_values):
        return False
    return all(s_values[k - 1] == t_values[k - 1] for k in clump(p))


def part_chi(ell: int) -> List[SetPartition]:
    return [p for p in all_partitions(ell) if in_part_chi(p)]


def part_chichi(two_ell: int) -> List[SetPartition]:
    _require_even(two_ell)
    return [p for p in all_partitions(two_ell) if in_part_chichi(p)]


@dataclass(frozen=True, eq=False)
class ClumpClasses:
    """
    Every tuple of <N>^(2 ell) in C order, labelled by clump-equivalence class.

    ``codes`` packs each tuple's restricted-growth string into one integer so
    that tuples sharing a generated partition share a code.
    """

    n: int
    ell: int
    codes: np.ndarray
    chi: np.ndarray
    chichi: np.ndarray
    class_ids: np.ndarray
    class_count: int

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n,) * (2 * self.ell)

    def partition_of_code(self, code: int) -> SetPartition:
        width = 2 * self.ell
        return SetPartition(tuple((code // width**c) % width for c in range(width)))


def _check_capacity(n: int, ell: int) -> None:
    if n < 1 or ell < 1:
        raise ValidationError(f"N and ell must be positive, got N={n}, ell={ell}")
    if n ** (2 * ell) > config.MAX_ENUMERATION:
        raise CapacityError(f"N^(2 ell) = {n}^{2 * ell} exceeds the enumeration cap {config.MAX_ENUMERATION}")


def clump_classes(n: int, ell: int) -> ClumpClasses:
    """
    Label every tuple of <N>^(2 ell) by clump class, with chi and chichi masks.

    Args:
        n: Index range N
        ell: Half the tuple length

    Returns:
        ClumpClasses, cached per (N, ell)
    """
    _check_capacity(n, ell)
    return _clump_classes(n, ell)


@lru_cache(maxsize=16)
def _clump_classes(n: int, ell: int) -> ClumpClasses:
    width = 2 * ell
    tuples = np.indices((n,) * width, dtype=np.int16).reshape(width, -1).T
    count = tuples.shape[0]

    rgs = np.empty_like(tuples)
    sizes = np.zeros_like(tuples)
    next_label = np.zeros(count, dtype=np.int16)
    for c in range(width):
        label = np.full(count, -1, dtype=np.int16)
        for d in range(c):
            hit = (tuples[:, d] == tuples[:, c]) & (label < 0)
            label[hit] = rgs[hit, d]
        fresh = label < 0
        label[fresh] = next_label[fresh]
        next_label[fresh] += 1
        rgs[:, c] = label
    for c in range(width):
        sizes[:, c] = (tuples == tuples[:, [c]]).sum(axis=1)

    chi = np.all(sizes > 1, axis=1)
    in_clump = np.ones_like(tuples, dtype=bool)
    for k in range(ell):
        left, right = 2 * k, 2 * k + 1
        doubleton = (tuples[:, left] == tuples[:, right]) & (sizes[:, left] == 2)
        in_clump[doubleton, left] = False
        in_clump[doubleton, right] = False
    chichi = chi & np.all(in_clump, axis=1)

    powers = width ** np.arange(width, dtype=np.int64)
    codes = rgs.astype(np.int64) @ powers
    key = np.column_stack((codes, np.where(in_clump, tuples, -1)))
    _, class_ids = np.unique(key, axis=0, return_inverse=True)
    class_ids = class_ids.reshape(-1)
    for array in (codes, chi, chichi, class_ids):
        array.flags.writeable = False
    logger.debug(f"labelled {count} tuples for N={n}, ell={ell} into {class_ids.max() + 1} clump classes")
    return ClumpClasses(n, ell, codes, chi, chichi, class_ids, int(class_ids.max()) + 1)


def _table(f, n: int, ell: int) -> np.ndarray:
    table = np.asarray(f, dtype=np.complex128)
    if table.shape != (n,) * (2 * ell):
        raise ShapeError(f"table shape {table.shape} does not match N={n}, 2 ell={2 * ell}")
    return table.reshape(-1)


def chichi_table_check(f, n: int, ell: int) -> bool:
    """
    Check a table on <N>^(2 ell) against the conclusions for chichi-class functions.

    The table must vanish on tuples whose partition has a singleton. When
    N >= 6 ell it must also be constant on clump-equivalence classes; below
    that only the vanishing condition is checked.
    """
    _check_capacity(n, ell)
    flat = _table(f, n, ell)
    classes = clump_classes(n, ell)
    tol = config.EXACT_TOL * max(1.0, float(np.abs(flat).max(initial=0.0)))
    if np.any(np.abs(flat[~classes.chi]) > tol):
        return False
    if n < 6 * ell:
        logger.debug(f"N={n} < 6 ell={6 * ell}: clump constancy not checked")
        return True
    _, first = np.unique(classes.class_ids, return_index=True)
    representative = flat[first][classes.class_ids]
    return bool(np.all(np.abs(flat - representative) <= tol))


def chichi_indicator_table(n: int, ell: int) -> np.ndarray:
    """F(i) = [Pi(i) in Part_chichi(2 ell)]."""
    _check_capacity(n, ell)
    classes = clump_classes(n, ell)
    return classes.chichi.astype(np.float64).reshape(classes.shape)


def random_chichi_table(n: int, ell: int, rng: RngLike) -> np.ndarray:
    """A table with one random complex value per clump class, zero off the chi support, max |F| = 1."""
    _check_capacity(n, ell)
    classes = clump_classes(n, ell)
    generator = as_generator(rng)
    values = generator.standard_normal(classes.class_count) + 1j * generator.standard_normal(classes.class_count)
    flat = np.where(classes.chi, values[classes.class_ids], 0.0)
    peak = np.abs(flat).max(initial=0.0)
    if peak > 0:
        flat = flat / peak
    return flat.reshape(classes.shape)
