"""
Set partitions of {1, ..., ell}, the refinement order and Moebius values.

Partitions are stored as restricted-growth strings: ``rgs[k]`` is the 0-based
index, in order of first appearance, of the block holding position k + 1.
Positions in every public API are 1-based.
"""
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..config import config
from ..errors import CapacityError, ShapeError, ValidationError
from ..utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, order=True)
class SetPartition:
    rgs: Tuple[int, ...]

    def __post_init__(self):
        rgs = tuple(int(b) for b in self.rgs)
        top = -1
        for b in rgs:
            if b < 0 or b > top + 1:
                raise ValidationError(f"{rgs} is not a restricted-growth string")
            top = max(top, b)
        object.__setattr__(self, "rgs", rgs)

    @property
    def ell(self) -> int:
        return len(self.rgs)

    @property
    def block_count(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    def blocks(self) -> Tuple[FrozenSet[int], ...]:
        """Blocks as sets of 1-based positions, in order of first appearance."""
        members: List[List[int]] = [[] for _ in range(self.block_count)]
        for position, b in enumerate(self.rgs, start=1):
            members[b].append(position)
        return tuple(frozenset(m) for m in members)

    def block_sizes(self) -> Tuple[int, ...]:
        sizes = [0] * self.block_count
        for b in self.rgs:
            sizes[b] += 1
        return tuple(sizes)

    def block_of(self, position: int) -> FrozenSet[int]:
        return self.blocks()[self.rgs[position - 1]]

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], ell: Optional[int] = None) -> "SetPartition":
        """Build from blocks of 1-based positions covering {1, ..., ell}."""
        seen: Dict[int, int] = {}
        for index, block in enumerate(blocks):
            if not block:
                raise ValidationError("blocks must be nonempty")
            for position in block:
                if position in seen:
                    raise ValidationError(f"position {position} lies in two blocks")
                seen[position] = index
        size = len(seen) if ell is None else ell
        if sorted(seen) != list(range(1, size + 1)):
            raise ShapeError(f"blocks do not cover exactly {{1, ..., {size}}}")
        return partition_of_tuple([seen[p] for p in range(1, size + 1)])

    @classmethod
    def minimal(cls, ell: int) -> "SetPartition":
        """0_ell, all singletons."""
        return cls(tuple(range(ell)))

    @classmethod
    def maximal(cls, ell: int) -> "SetPartition":
        return cls((0,) * ell)

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks()) + "}"


@dataclass(frozen=True)
class IndexTuple:
    """(i_1, ..., i_ell); when ``n`` is given each entry must lie in 1..n."""

    values: Tuple[int, ...]
    n: Optional[int] = None

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        if self.n is not None and any(not 1 <= v <= self.n for v in values):
            raise ValidationError(f"tuple {values} has entries outside 1..{self.n}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def _values(t) -> Tuple[int, ...]:
    if isinstance(t, IndexTuple):
        return t.values
    return tuple(int(v) for v in t)


def partition_of_tuple(t) -> SetPartition:
    """The partition generated by a tuple: its blocks are the level sets."""
    labels: Dict[int, int] = {}
    rgs = []
    for value in _values(t):
        if value not in labels:
            labels[value] = len(labels)
        rgs.append(labels[value])
    return SetPartition(tuple(rgs))


def refines(p: SetPartition, q: SetPartition) -> bool:
    """True iff every block of p lies inside a block of q."""
    if p.ell != q.ell:
        raise ShapeError(f"ground sets differ: {p.ell} vs {q.ell}")
    target: Dict[int, int] = {}
    for bp, bq in zip(p.rgs, q.rgs):
        if target.setdefault(bp, bq) != bq:
            return False
    return True


def _rgs_strings(ell: int) -> Iterator[Tuple[int, ...]]:
    if ell == 0:
        yield ()
        return

    def extend(prefix: List[int], top: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == ell:
            yield tuple(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from extend(prefix, max(top, b))
            prefix.pop()

    yield from extend([0], 0)


def all_partitions(ell: int) -> List[SetPartition]:
    """Every partition of {1..ell} once, in lexicographic restricted-growth order."""
    if ell < 0:
        raise ValidationError(f"ell must be nonnegative, got {ell}")
    if ell > config.MAX_PARTITION_ELL:
        raise CapacityError(f"partition enumeration limited to ell <= {config.MAX_PARTITION_ELL}")
    return list(_cached_partitions(ell))


@lru_cache(maxsize=None)
def _cached_partitions(ell: int) -> Tuple[SetPartition, ...]:
    return tuple(SetPartition(rgs) for rgs in _rgs_strings(ell))


def bell_number(ell: int) -> int:
    """Number of partitions of an ell-set, from the Bell triangle."""
    if ell < 0:
        raise ValidationError(f"ell must be nonnegative, got {ell}")
    row = [1]
    for _ in range(ell):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def mobius_zero(p: SetPartition) -> int:
    """mu(0_ell, p) = prod over blocks of (-1)^(|B|-1) (|B|-1)!."""
    value = 1
    for size in p.block_sizes():
        value *= (-1) ** (size - 1) * math.factorial(size - 1)
    return value


def refinements(p: SetPartition) -> Iterator[SetPartition]:
    """Every partition below p in the refinement order."""
    blocks = [sorted(b) for b in p.blocks()]
    per_block = [_cached_partitions(len(b)) for b in blocks]
    for choice in itertools.product(*per_block):
        labels = [0] * p.ell
        offset = 0
        for block, sub in zip(blocks, choice):
            for position, b in zip(block, sub.rgs):
                labels[position - 1] = offset + b
            offset += sub.block_count
        yield partition_of_tuple(labels)


def mobius_inversion_check(ell: int, mobius: Optional[Callable[[SetPartition], int]] = None) -> bool:
    """
    Verify sum over theta <= pi of mu(0, theta) = [pi = 0_ell] for all pi.

    Args:
        ell: Ground-set size, at most MAX_MOBIUS_ELL
        mobius: Table of mu(0, .) to test; defaults to ``mobius_zero``
    """
    if ell > config.MAX_MOBIUS_ELL:
        raise CapacityError(f"Moebius check limited to ell <= {config.MAX_MOBIUS_ELL}")
    mobius = mobius or mobius_zero
    bottom = SetPartition.minimal(ell)
    for p in all_partitions(ell):
        total = sum(mobius(theta) for theta in refinements(p))
        if total != (1 if p == bottom else 0):
            logger.debug(f"Moebius inversion fails at {p}: sum {total}")
            return False
    return True


def crude_bounds_check(ell: int) -> bool:
    """|Part(ell)| <= ell^ell and max |mu(0, pi)| <= ell^ell."""
    if ell < 1:
        raise ValidationError(f"ell must be positive, got {ell}")
    if ell > config.MAX_MOBIUS_ELL:
        raise CapacityError(f"crude bound check limited to ell <= {config.MAX_MOBIUS_ELL}")
    partitions = all_partitions(ell)
    bound = ell**ell
    return len(partitions) <= bound and max(abs(mobius_zero(p)) for p in partitions) <= bound


def _tables(f_tables) -> np.ndarray:
    tables = np.asarray(f_tables, dtype=np.complex128)
    if tables.ndim != 2 or tables.shape[0] < 1:
        raise ShapeError(f"expected an (ell, N) array of function tables, got shape {tables.shape}")
    return tables


def block_product(f_tables, p: SetPartition, support: Optional[np.ndarray] = None) -> complex:
    """prod over blocks B of sum over i of prod over b in B of f_b(i)."""
    tables = _tables(f_tables)
    if p.ell != tables.shape[0]:
        raise ShapeError(f"partition of {p.ell} points for {tables.shape[0]} tables")
    mask = np.ones(tables.shape[1], dtype=bool) if support is None else support
    value = 1.0 + 0.0j
    for block in p.blocks():
        rows = [b - 1 for b in block]
        value *= complex(np.prod(tables[rows], axis=0)[mask].sum())
    return value


def product_tensor(f_tables) -> np.ndarray:
    """f(i) = f_1(i_1) ... f_ell(i_ell) as an N^ell array."""
    tables = _tables(f_tables)
    ell, n = tables.shape
    if n**ell > config.MAX_ENUMERATION:
        raise CapacityError(f"N^ell = {n}^{ell} exceeds the enumeration cap")
    result = tables[0]
    for row in tables[1:]:
        result = np.multiply.outer(result, row)
    return result


def sum_over_refined(f_tables, p: SetPartition) -> complex:
    """Sum of f(i) over tuples i with p <= Pi(i), by enumeration."""
    tensor = product_tensor(f_tables)
    if p.ell != tensor.ndim:
        raise ShapeError(f"partition of {p.ell} points for {tensor.ndim} tables")
    n = tensor.shape[0]
    index = np.indices(tensor.shape).reshape(tensor.ndim, -1)
    keep = np.ones(index.shape[1], dtype=bool)
    for block in p.blocks():
        first, *others = sorted(block)
        for b in others:
            keep &= index[b - 1] == index[first - 1]
    logger.debug(f"summing {int(keep.sum())} of {n ** tensor.ndim} tuples for {p}")
    return complex(tensor.reshape(-1)[keep].sum())


def distinct_sum_by_mobius(f_tables, excluded: Sequence[int] = ()) -> complex:
    """
    Sum of f over distinct indices avoiding ``excluded`` (0-based), via Moebius inversion.

    Requires centered tables: a singleton block contributes minus its sum over
    the excluded set.
    """
    tables = _tables(f_tables)
    ell, n = tables.shape
    in_j = np.zeros(n, dtype=bool)
    in_j[list(excluded)] = True
    total = 0.0 + 0.0j
    for p in all_partitions(ell):
        term = complex(mobius_zero(p))
        for block in p.blocks():
            rows = [b - 1 for b in block]
            if len(rows) == 1:
                term *= -complex(tables[rows[0]][in_j].sum())
            else:
                term *= complex(np.prod(tables[rows], axis=0)[~in_j].sum())
        total += term
    return total
