"""Monte Carlo statistics behind the entry-moment and invariance hypotheses."""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config import config
from ..errors import ValidationError
from ..utils.logger import get_logger
from ..utils.parallel import run_trials
from ..utils.stats import mean_and_se
from .families import FamilySampler
from .rng import SeededRng
from .signed import SignedPermutation

logger = get_logger(__name__)

ALLOWED_ELLS = (2, 4, 6, 8)
RANDOM_PROBES = 4
PROBE_NAMES = ("(1,1)", "(1,N/2)", "(N/2,N/2)", "(N,N)", "random")


@dataclass(frozen=True)
class EntryMomentEstimate:
    """sqrt(N) (E|U(a,b)|^ell)^(1/ell) per probe, with the maximizing probe singled out."""

    value: float
    se: float
    probe: str
    per_probe: Dict[str, Tuple[float, float]]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "se": self.se,
            "probe": self.probe,
            "per_probe": {k: list(v) for k, v in self.per_probe.items()},
        }


def _fixed_probes(n: int) -> List[Tuple[int, int]]:
    half = max(n // 2 - 1, 0)
    return [(0, 0), (0, half), (half, half), (n - 1, n - 1)]


def _probe_values(
    u: np.ndarray, ell: int, generator: np.random.Generator, conjugator: Optional[SignedPermutation]
) -> np.ndarray:
    if conjugator is not None:
        u = conjugator.conjugate(u)
    n = u.shape[0]
    rows, cols = zip(*_fixed_probes(n))
    fixed = np.abs(u[list(rows), list(cols)]) ** ell
    r = generator.integers(0, n, size=(RANDOM_PROBES, 2))
    pooled = float(np.mean(np.abs(u[r[:, 0], r[:, 1]]) ** ell))
    return np.append(fixed, pooled)


def entry_moment_statistic(
    sampler: FamilySampler,
    ell: int,
    trials: int,
    rng: SeededRng,
    pair: Tuple[int, int] = (0, 1),
    conjugator: Optional[SignedPermutation] = None,
    workers: Optional[int] = None,
) -> EntryMomentEstimate:
    """
    Estimate max over probes of sqrt(N) (E|U_ij(a, b)|^ell)^(1/ell), U_ij = U_i* U_j.

    Args:
        sampler: Returns a sequence of unitaries per call; ``pair`` picks two
        ell: Even moment order in {2, 4, 6, 8}
        trials: Monte Carlo draws, at least MIN_ENTRY_MOMENT_TRIALS
        rng: Root stream; trial k uses rng.derive(k)
        conjugator: Optional fixed signed permutation V applied as V* U_ij V

    Returns:
        EntryMomentEstimate with delta-method standard errors
    """
    if ell not in ALLOWED_ELLS:
        raise ValidationError(f"ell must be one of {ALLOWED_ELLS}, got {ell}")
    if trials < config.MIN_ENTRY_MOMENT_TRIALS:
        raise ValidationError(f"need at least {config.MIN_ENTRY_MOMENT_TRIALS} trials, got {trials}")

    def trial(_index: int, generator: np.random.Generator) -> Tuple[int, np.ndarray]:
        unitaries = sampler(generator)
        if len(unitaries) < 2 or max(pair) >= len(unitaries):
            raise ValidationError("the sampler must return at least two unitaries to form U_i* U_j")
        u = np.asarray(unitaries[pair[0]]).conj().T @ np.asarray(unitaries[pair[1]])
        return u.shape[0], _probe_values(u, ell, generator, conjugator)

    results = run_trials(trial, trials, rng, workers)
    n = results[0][0]
    samples = np.array([values for _, values in results])
    means, ses = mean_and_se(samples)
    per_probe: Dict[str, Tuple[float, float]] = {}
    for name, mean, se in zip(PROBE_NAMES, means, ses):
        value = np.sqrt(n) * mean ** (1.0 / ell)
        # delta method: d(m^(1/ell))/dm = m^(1/ell - 1) / ell
        spread = np.sqrt(n) * mean ** (1.0 / ell - 1.0) * se / ell if mean > 0 else 0.0
        per_probe[name] = (float(value), float(spread))
    best = max(per_probe, key=lambda k: per_probe[k][0])
    logger.debug(f"entry moment ell={ell} over {trials} trials: {per_probe[best][0]:.4f} at {best}")
    return EntryMomentEstimate(per_probe[best][0], per_probe[best][1], best, per_probe)


@dataclass(frozen=True)
class InvarianceComparison:
    plain: EntryMomentEstimate
    conjugated: EntryMomentEstimate
    max_z: float
    passed: bool


def conjugation_invariance_statistic(
    sampler: FamilySampler,
    v: SignedPermutation,
    ell: int,
    trials: int,
    rng: SeededRng,
    sigmas: float = 3.0,
    pair: Tuple[int, int] = (0, 1),
) -> InvarianceComparison:
    """
    Compare entry moments of U_i* U_j and V*(U_i* U_j)V on independent draws.

    Passes when every probe agrees within ``sigmas`` combined standard errors.
    """
    plain = entry_moment_statistic(sampler, ell, trials, rng.derive(0), pair)
    conjugated = entry_moment_statistic(sampler, ell, trials, rng.derive(1), pair, conjugator=v)
    z_scores: List[float] = []
    for name in PROBE_NAMES:
        (a, sa), (b, sb) = plain.per_probe[name], conjugated.per_probe[name]
        spread = float(np.hypot(sa, sb))
        if spread > 0:
            z_scores.append(abs(a - b) / spread)
        else:
            z_scores.append(0.0 if np.isclose(a, b, rtol=0, atol=config.UNITARY_TOL) else np.inf)
    max_z = max(z_scores)
    return InvarianceComparison(plain, conjugated, max_z, bool(max_z <= sigmas))


def khinchin_bound(ell: int) -> float:
    """(ell - 1)!!^(1/ell), the Gaussian moment constant bounding Rademacher sums."""
    if ell < 2 or ell % 2:
        raise ValidationError(f"ell must be a positive even integer, got {ell}")
    return float(np.prod(np.arange(ell - 1, 0, -2))) ** (1.0 / ell)

