"""
The Fibonacci distribution and the exact weights it puts on index tuples.

A Fibonacci variable takes the two roots of x^2 = x + 1, with mean 0 and
variance 1. Because phi^2 - 1 = phi, its moments obey m_k = m_(k-1) + m_(k-2).
"""
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from ..config import config
from ..ensembles.signed import RngLike, as_generator
from ..errors import CapacityError, ShapeError, ValidationError
from ..utils.stats import mean_and_se
from .lattice import _values

PHI_PLUS = (1.0 + np.sqrt(5.0)) / 2.0
PHI_MINUS = (1.0 - np.sqrt(5.0)) / 2.0
PROB_PLUS = (np.sqrt(5.0) - 1.0) / (2.0 * np.sqrt(5.0))


@dataclass(frozen=True)
class FibonacciVariate:
    value: float

    def __post_init__(self):
        value = float(self.value)
        if abs(value * value - value - 1.0) > 1e-12:
            raise ValidationError(f"{value} is not a root of x^2 = x + 1")
        object.__setattr__(self, "value", value)


def sample_fibonacci(rng: RngLike) -> FibonacciVariate:
    return FibonacciVariate(float(sample_fibonacci_array(1, rng)[0]))


def sample_fibonacci_array(size, rng: RngLike) -> np.ndarray:
    """i.i.d. Fibonacci draws of the given shape."""
    generator = as_generator(rng)
    return np.where(generator.random(size) < PROB_PLUS, PHI_PLUS, PHI_MINUS)


@lru_cache(maxsize=None)
def fibonacci_moment(k: int) -> int:
    """E phi^k: 1, 0, 1, 1, 2, 3, 5, 8, ..."""
    if k < 0:
        raise ValidationError(f"moment order must be nonnegative, got {k}")
    if k > config.MAX_FIBONACCI_K:
        raise CapacityError(f"Fibonacci moments limited to k <= {config.MAX_FIBONACCI_K}")
    previous, current = 1, 0
    for _ in range(k):
        previous, current = current, previous + current
    return previous


def _pairs(t) -> Tuple[int, ...]:
    values = _values(t)
    if len(values) % 2:
        raise ShapeError(f"tuple length must be even, got {len(values)}")
    if len(values) > config.MAX_WEIGHT_LENGTH:
        raise CapacityError(f"weights limited to tuples of length <= {config.MAX_WEIGHT_LENGTH}")
    return values


def _moment_of_counts(counts: Dict[int, int]) -> int:
    value = 1
    for count in counts.values():
        value *= fibonacci_moment(count)
        if value == 0:
            break
    return value


def fibonacci_weight(t) -> int:
    """
    E prod over lambda of (phi_(i_(2 lambda - 1)) phi_(i_(2 lambda)) - delta) for i.i.d. phi.

    The delta terms are expanded by inclusion-exclusion over the pairs whose
    two entries coincide.

    Args:
        t: Index tuple of even length at most MAX_WEIGHT_LENGTH

    Returns:
        The exact integer expectation
    """
    values = _pairs(t)
    pairs = [(values[2 * k], values[2 * k + 1]) for k in range(len(values) // 2)]
    equal = [k for k, (a, b) in enumerate(pairs) if a == b]
    total = 0
    for r in range(len(equal) + 1):
        for dropped in itertools.combinations(equal, r):
            counts: Dict[int, int] = {}
            for k, (a, b) in enumerate(pairs):
                if k in dropped:
                    continue
                counts[a] = counts.get(a, 0) + 1
                counts[b] = counts.get(b, 0) + 1
            total += (-1) ** r * _moment_of_counts(counts)
    return total


def fibonacci_weight_reduced(t) -> int:
    """The same expectation after phi^2 - 1 = phi: prod over blocks A of m(|A| - m_A)."""
    values = _pairs(t)
    counts: Dict[int, int] = {}
    for a in values:
        counts[a] = counts.get(a, 0) + 1
    for k in range(len(values) // 2):
        if values[2 * k] == values[2 * k + 1]:
            counts[values[2 * k]] -= 1
    return _moment_of_counts(counts)


def fibonacci_weight_monte_carlo(t, trials: int, rng: RngLike) -> Tuple[float, float]:
    """Monte Carlo estimate of ``fibonacci_weight(t)`` with its standard error."""
    values = _pairs(t)
    if trials < 2:
        raise ValidationError(f"need at least 2 trials, got {trials}")
    distinct = sorted(set(values))
    column = {v: c for c, v in enumerate(distinct)}
    phi = sample_fibonacci_array((trials, len(distinct)), rng)
    product = np.ones(trials)
    for k in range(len(values) // 2):
        a, b = column[values[2 * k]], column[values[2 * k + 1]]
        product *= phi[:, a] * phi[:, b] - (1.0 if a == b else 0.0)
    mean, se = mean_and_se(product)
    return float(mean), float(se)


def partition_weights(codes: np.ndarray, width: int) -> Dict[int, int]:
    """Fibonacci weight per packed restricted-growth code; the weight depends only on the partition."""
    weights: Dict[int, int] = {}
    for code in np.unique(codes).tolist():
        rgs = tuple((code // width**c) % width for c in range(width))
        weights[int(code)] = fibonacci_weight(rgs)
    return weights
