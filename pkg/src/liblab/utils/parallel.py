"""Worker pool for independent Monte Carlo trials."""
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, Callable, List, Optional, TypeVar

import numpy as np

from ..config import config
from .logger import get_logger

if TYPE_CHECKING:
    from ..ensembles.rng import SeededRng

logger = get_logger(__name__)

T = TypeVar("T")


def worker_count(workers: Optional[int] = None) -> int:
    """Effective pool size: explicit request, else LIBLAB_THREADS."""
    count = workers if workers is not None else config.THREADS
    return max(1, int(count))


def run_trials(
    task: Callable[[int, np.random.Generator], T],
    count: int,
    rng: "SeededRng",
    workers: Optional[int] = None,
) -> List[T]:
    """
    Run ``task(index, generator)`` for ``index in range(count)``.

    Each trial draws from ``rng.derive(index)``; results are returned in index
    order, so any fold over them is independent of the pool size.
    """
    pool_size = min(worker_count(workers), max(count, 1))

    def _one(index: int) -> T:
        return task(index, rng.derive(index).generator())

    if pool_size == 1:
        return [_one(i) for i in range(count)]

    logger.debug(f"Running {count} trials on {pool_size} threads")
    with ThreadPoolExecutor(max_workers=pool_size, thread_name_prefix="liblab-trial") as pool:
        return list(pool.map(_one, range(count)))
