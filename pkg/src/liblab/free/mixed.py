"""
Mixed moments of free variables from their marginals.

Words are evaluated on reduced tensors: a vector is a combination of centered
alternating words c_(p1) c_(p2) ... (c_p = a^p - m_p for the letter's own
variable), and the empty word stands for the scalar 1. Multiplying a power a^p
onto the left of such a word either prepends a new centered letter or, when the
leading letter carries the same label, collapses the pair and re-centers it by
moment lookup. A centered alternating word has zero expectation, so
phi(word) is the coefficient of the empty word once all letters are applied.

``free_mixed_moment_by_centering`` evaluates the same quantity through the
inclusion-exclusion identity obtained by centering every letter; it is
exponential in the word length and serves as an independent cross-check.
"""
import itertools
from collections import Counter, defaultdict
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

from ..config import config
from ..errors import CapacityError, ValidationError
from ..utils.logger import get_logger
from .moments import AlternatingWord, MomentSequence

logger = get_logger(__name__)

Word = Union[AlternatingWord, Sequence[Hashable]]
CanonicalWord = Tuple[Tuple[int, int], ...]

# The centering expansion visits 2^r subsets per word.
MAX_CENTERING_LETTERS = 12


def _as_letters(word: Word) -> Tuple[Tuple[Hashable, int], ...]:
    if isinstance(word, AlternatingWord):
        return word.letters
    items = list(word)
    if items and all(isinstance(item, tuple) and len(item) == 2 for item in items):
        return AlternatingWord.from_labels(
            label for label, power in items for _ in range(int(power))
        ).letters
    return AlternatingWord.from_labels(items).letters


def cyclic_reduce(letters: Sequence[Tuple[int, int]]) -> CanonicalWord:
    """Merge neighbours (cyclically) that share a label, then take the least rotation."""
    merged: List[Tuple[int, int]] = []
    for label, power in letters:
        if merged and merged[-1][0] == label:
            merged[-1] = (label, merged[-1][1] + power)
        else:
            merged.append((label, power))
    while len(merged) > 1 and merged[0][0] == merged[-1][0]:
        label, power = merged.pop()
        merged[0] = (label, merged[0][1] + power)
    if not merged:
        return ()
    return min(tuple(merged[i:] + merged[:i]) for i in range(len(merged)))


class FreeMomentCalculator:
    """
    Evaluates words in free variables with prescribed marginals.

    Args:
        marginals: Mapping from variable label to its MomentSequence

    Results are memoized per instance on the cyclically reduced word, which
    traciality makes a complete invariant.
    """

    def __init__(self, marginals: Mapping[Hashable, MomentSequence]):
        if not marginals:
            raise ValidationError("at least one marginal is required")
        self.labels: List[Hashable] = list(marginals)
        self._index = {label: i for i, label in enumerate(self.labels)}
        self._moments = [marginals[label] for label in self.labels]
        self._memo: Dict[CanonicalWord, float] = {}

    def encode(self, word: Word, max_degree: Optional[int] = None) -> Tuple[Tuple[int, int], ...]:
        letters = _as_letters(word)
        max_degree = config.MAX_WORD_LENGTH if max_degree is None else max_degree
        if sum(power for _, power in letters) > max_degree:
            raise CapacityError(f"word degree exceeds cap {max_degree}")
        encoded = []
        for label, power in letters:
            if label not in self._index:
                raise ValidationError(f"no marginal given for variable {label!r}")
            encoded.append((self._index[label], power))
        degrees: Counter = Counter()
        for index, power in encoded:
            degrees[index] += power
        for index, degree in degrees.items():
            if degree > self._moments[index].order:
                raise ValidationError(
                    f"variable {self.labels[index]!r} needs moments up to order {degree}, "
                    f"only {self._moments[index].order} given"
                )
        return tuple(encoded)

    def moment(self, word: Word, max_degree: Optional[int] = None) -> float:
        return self.canonical_moment(cyclic_reduce(self.encode(word, max_degree)))

    def linear_moment(self, word: Word, max_degree: Optional[int] = None) -> float:
        """phi(word) expanded right to left as written, with no rotation and no memo."""
        letters = self.encode(word, max_degree)
        if not letters:
            return 1.0
        if len(letters) == 1:
            return self.marginal_moment(*letters[0])
        return self._propagate(letters)

    def marginal_moment(self, index: int, power: int) -> float:
        return self._moments[index][power]

    def canonical_moment(self, key: CanonicalWord) -> float:
        if key in self._memo:
            return self._memo[key]
        if not key:
            value = 1.0
        elif len(key) == 1:
            value = self.marginal_moment(*key[0])
        else:
            value = self._propagate(key)
        self._memo[key] = value
        return value

    def _propagate(self, letters: CanonicalWord) -> float:
        state: Dict[CanonicalWord, float] = {(): 1.0}
        remaining = len(letters)
        for label, power in reversed(letters):
            remaining -= 1
            nxt: Dict[CanonicalWord, float] = defaultdict(float)
            for tensor, coef in state.items():
                if tensor and tensor[0][0] == label:
                    q = tensor[0][1]
                    rest = tensor[1:]
                    nxt[((label, power + q),) + rest] += coef
                    nxt[((label, power),) + rest] -= coef * self.marginal_moment(label, q)
                    covariance = self.marginal_moment(label, power + q) - self.marginal_moment(label, power) * self.marginal_moment(label, q)
                    nxt[rest] += coef * covariance
                else:
                    nxt[((label, power),) + tensor] += coef
                    nxt[tensor] += coef * self.marginal_moment(label, power)
            # each further letter shortens a tensor by at most one
            state = {t: c for t, c in nxt.items() if len(t) <= remaining and c != 0.0}
        return state.get((), 0.0)


def free_mixed_moment(marginals: Mapping[Hashable, MomentSequence], word: Word) -> float:
    """
    phi(word) for free variables with the given marginals.

    Args:
        marginals: Mapping from label to MomentSequence
        word: Sequence of labels (one variable per position), or an AlternatingWord

    Returns:
        The mixed moment
    """
    return FreeMomentCalculator(marginals).moment(word)


def free_mixed_moment_by_centering(marginals: Mapping[Hashable, MomentSequence], word: Word) -> float:
    """
    phi(word) from 0 = phi(prod_i (x_i - phi(x_i))).

    Expanding the centered product gives
    phi(x_1...x_r) = -sum over nonempty I of (-1)^|I| prod_(i in I) phi(x_i) phi(x_([r] minus I)),
    and every subword on the right is strictly shorter.
    """
    calc = FreeMomentCalculator(marginals)
    letters = cyclic_reduce(calc.encode(word))
    if len(letters) > MAX_CENTERING_LETTERS:
        raise CapacityError(f"centering expansion limited to {MAX_CENTERING_LETTERS} letters")
    memo: Dict[CanonicalWord, float] = {}

    def evaluate(key: CanonicalWord) -> float:
        if key in memo:
            return memo[key]
        if not key:
            result = 1.0
        elif len(key) == 1:
            result = calc.marginal_moment(*key[0])
        else:
            means = [calc.marginal_moment(label, power) for label, power in key]
            result = 0.0
            for mask in range(1, 1 << len(key)):
                weight = 1.0
                kept = []
                for i, letter in enumerate(key):
                    if mask >> i & 1:
                        weight *= -means[i]
                    else:
                        kept.append(letter)
                if weight != 0.0:
                    result -= weight * evaluate(cyclic_reduce(kept))
        memo[key] = result
        return result

    return evaluate(letters)


def _canonical_order(marginals: Sequence[MomentSequence]) -> List[MomentSequence]:
    # addition is symmetric, so a fixed order makes swapped inputs bit-identical
    return sorted(marginals, key=lambda m: (m.moments, m.radius_hint or 0.0))


def free_additive_moments(
    m_a: MomentSequence, m_b: MomentSequence, order: int, *more: MomentSequence
) -> MomentSequence:
    """
    Moments 1..order of a + b (+ further summands) for free variables.

    Each phi((a+b)^k) is expanded into its 2^k words; words are grouped by
    their cyclically reduced form and each class is evaluated once.
    """
    if order > config.MAX_ADDITIVE_K:
        raise CapacityError(f"additive moment order {order} exceeds cap {config.MAX_ADDITIVE_K}")
    summands = _canonical_order([m_a, m_b, *more])
    if len(summands) ** order > config.MAX_ENUMERATION:
        raise CapacityError(f"{len(summands)}^{order} words exceed the enumeration cap")
    for m in summands:
        if m.order < order:
            raise ValidationError(f"marginal of order {m.order} cannot give moment {order}")
    labels = list(range(len(summands)))
    calc = FreeMomentCalculator(dict(zip(labels, summands)))
    values = []
    for k in range(1, order + 1):
        classes: Counter = Counter(
            cyclic_reduce([(label, 1) for label in word]) for word in itertools.product(labels, repeat=k)
        )
        values.append(sum(count * calc.canonical_moment(key) for key, count in sorted(classes.items())))
    logger.debug(f"free additive convolution of {len(summands)} laws to order {order}")
    return MomentSequence(tuple(values), validate=False)


def free_multiplicative_moments(
    m_a: MomentSequence, m_b: MomentSequence, order: int, *more: MomentSequence
) -> MomentSequence:
    """
    Moments 1..order of a^(1/2) b a^(1/2), i.e. phi((ab)^k) by traciality.

    Further factors extend the alternating word to (a b c ...)^k. ``m_a``
    must describe a law on [0, infinity).
    """
    if order > config.MAX_MULTIPLICATIVE_K:
        raise CapacityError(f"multiplicative moment order {order} exceeds cap {config.MAX_MULTIPLICATIVE_K}")
    if not m_a.is_nonnegative_law():
        raise ValidationError("the first factor must be the law of a nonnegative variable")
    factors = [m_a, m_b, *more]
    for m in factors:
        if m.order < order:
            raise ValidationError(f"marginal of order {m.order} cannot give moment {order}")
    labels = list(range(len(factors)))
    calc = FreeMomentCalculator(dict(zip(labels, factors)))
    word = [(label, 1) for label in labels]
    values = [calc.moment(word * k, max_degree=len(labels) * order) for k in range(1, order + 1)]
    return MomentSequence(tuple(values), validate=False)
