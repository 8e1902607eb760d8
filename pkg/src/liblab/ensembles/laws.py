"""Named laws for the diagonal matrices fed to experiments."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ValidationError
from ..free.moments import MomentSequence
from .signed import RngLike, as_generator

LAW_NAMES = ("zero", "one", "rademacher", "bernoulli")


@dataclass(frozen=True)
class DiagonalLaw:
    """
    A law on the real line used to fill diagonal matrices.

    ``zero`` and ``one`` are point masses, ``rademacher`` is the symmetric
    +-1 law and ``bernoulli`` puts mass p at 1 and 1 - p at 0.
    """

    name: str
    p: Optional[float] = None

    def __post_init__(self):
        if self.name not in LAW_NAMES:
            raise ValidationError(f"unknown law {self.name!r}; expected one of {LAW_NAMES}")
        if self.name == "bernoulli":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValidationError(f"bernoulli needs p in [0, 1], got {self.p}")
        elif self.p is not None:
            raise ValidationError(f"law {self.name!r} takes no parameter")

    @classmethod
    def parse(cls, spec: str) -> "DiagonalLaw":
        """Parse ``zero``, ``one``, ``rademacher`` or ``bernoulli:p``."""
        name, _, param = spec.strip().lower().partition(":")
        if name == "bernoulli":
            try:
                return cls(name, float(param) if param else 0.5)
            except ValueError as e:
                raise ValidationError(f"bad Bernoulli parameter in {spec!r}") from e
        if param:
            raise ValidationError(f"law {name!r} takes no parameter (got {spec!r})")
        return cls(name)

    def __str__(self) -> str:
        return f"bernoulli:{self.p:g}" if self.name == "bernoulli" else self.name

    @property
    def is_nonnegative(self) -> bool:
        return self.name != "rademacher"

    def moments(self, order: int) -> MomentSequence:
        if self.name == "zero":
            return MomentSequence.point_mass(0.0, order)
        if self.name == "one":
            return MomentSequence.point_mass(1.0, order)
        if self.name == "rademacher":
            return MomentSequence.symmetric_bernoulli(order)
        return MomentSequence.bernoulli(self.p, order)

    def deterministic_diagonal(self, n: int) -> np.ndarray:
        """Diagonal whose empirical law is as close to this law as n allows."""
        if n < 1:
            raise ValidationError(f"n must be positive, got {n}")
        if self.name == "zero":
            return np.zeros(n)
        if self.name == "one":
            return np.ones(n)
        if self.name == "rademacher":
            return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        ones = int(round(self.p * n))
        return np.concatenate((np.ones(ones), np.zeros(n - ones)))

    def sample_diagonal(self, n: int, rng: RngLike) -> np.ndarray:
        """i.i.d. draws from this law."""
        if n < 1:
            raise ValidationError(f"n must be positive, got {n}")
        generator = as_generator(rng)
        if self.name == "zero":
            return np.zeros(n)
        if self.name == "one":
            return np.ones(n)
        if self.name == "rademacher":
            return (1 - 2 * generator.integers(0, 2, size=n)).astype(float)
        return (generator.random(n) < self.p).astype(float)
