"""Reproducible random streams keyed by (seed, stream_id)."""
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

_UINT64 = 2**64


@dataclass(frozen=True)
class SeededRng:
    """
    A root seed plus a stream identifier.

    Identical (seed, stream_id) pairs reproduce identical draws, so trial ``k``
    sees the same numbers whether trials run serially or on a worker pool.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= int(value) < _UINT64:
                raise ValidationError(f"{name} must be an integer in [0, 2**64), got {value!r}")

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.PCG64(sequence))

    def derive(self, *keys: int) -> "SeededRng":
        """Child stream for a nested key path (e.g. sweep index, then trial index)."""
        if any(int(k) < 0 for k in keys):
            raise ValidationError(f"stream keys must be nonnegative, got {keys}")
        mixed = np.random.SeedSequence([int(self.stream_id), *(int(k) for k in keys)])
        state = mixed.generate_state(1, dtype=np.uint64)[0]
        return SeededRng(int(self.seed), int(state))
