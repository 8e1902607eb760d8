"""
Exact averages over the signed permutation group and the identities built on them.

For fixed unitaries V_a and a uniformly random signed permutation W, the
unitaries U_a = V_a W form the fake Haar family. With n <= MAX_GROUP_N the
expectation over W is an exact finite average.
"""
from typing import List, Optional, Sequence

import numpy as np

from ..config import config
from ..ensembles.rng import SeededRng
from ..ensembles.signed import SignedPermutation, all_signed_permutations, sample_signed_permutation
from ..errors import CapacityError, ShapeError, ValidationError
from ..linalg.matrix import MatrixLike, as_array
from ..partitions.chi import chichi_table_check
from ..utils.logger import get_logger
from ..utils.parallel import run_trials
from ..utils.stats import mean_and_se
from .report import TraceZeroMatrixSet, VerificationReport

logger = get_logger(__name__)

FIVE_SIGMA = 5.0


def _unitaries(v_list: Sequence[MatrixLike], n: int) -> List[np.ndarray]:
    arrays = [as_array(v) for v in v_list]
    for index, v in enumerate(arrays, start=1):
        if v.shape != (n, n):
            raise ShapeError(f"V_{index} has shape {v.shape}, expected ({n}, {n})")
        defect = float(np.linalg.norm(v @ v.conj().T - np.eye(n), "fro"))
        if defect > config.UNITARY_TOL * n:
            raise ValidationError(f"V_{index} is not unitary (defect {defect:.3e})")
    return arrays


def _group(n: int) -> List[SignedPermutation]:
    if n > config.MAX_GROUP_N:
        raise CapacityError(f"exact group averages limited to n <= {config.MAX_GROUP_N}, got {n}")
    return list(all_signed_permutations(n))


def _trace_word(v_list: Sequence[np.ndarray], a_list: Sequence[np.ndarray], w: SignedPermutation) -> complex:
    product = np.eye(w.n, dtype=np.complex128)
    for v, a in zip(v_list, a_list):
        product = product @ v @ w.conjugate_adjoint(a) @ v.conj().T
    return complex(np.trace(product))


def _group_average(v_list: Sequence[np.ndarray], a_list: Sequence[np.ndarray], n: int) -> complex:
    group = _group(n)
    return sum(_trace_word(v_list, a_list, w) for w in group) / len(group)


def brute_force_group_expectation(
    v_list: Sequence[MatrixLike], a_list, n: Optional[int] = None
) -> complex:
    """
    Exact average over signed permutations w of tr(V_1 w A_1 w* V_1* ... V_ell w A_ell w* V_ell*).

    Args:
        v_list: Fixed unitaries V_1, ..., V_ell
        a_list: Trace-zero A_1, ..., A_ell
        n: Matrix size; inferred from A_1 when omitted

    Returns:
        The group average of the unnormalized trace
    """
    matrices = TraceZeroMatrixSet.of(a_list)
    n = matrices.n if n is None else n
    if matrices.n != n:
        raise ShapeError(f"A has size {matrices.n}, expected {n}")
    if len(v_list) != matrices.ell:
        raise ShapeError(f"{len(v_list)} unitaries for {matrices.ell} matrices")
    return _group_average(_unitaries(v_list, n), matrices.arrays(), n)


def _twisted_matrices(unitaries: Sequence[np.ndarray], pattern: Sequence[int], w: SignedPermutation) -> List[np.ndarray]:
    """V_1 = U_(a_ell)* U_(a_1), V_k = U_(a_(k-1))* U_(a_k), with U_a = V_a W."""
    u = [w.right_multiply(unitaries[a]) for a in pattern]
    return [u[k - 1].conj().T @ u[k] for k in range(len(pattern))]


def _entry_tensor(v_list: Sequence[np.ndarray]) -> np.ndarray:
    """prod over lambda of V_lambda(i_(2 lambda - 1), i_(2 lambda)) as an N^(2 ell) array."""
    tensor = v_list[0]
    for v in v_list[1:]:
        tensor = np.multiply.outer(tensor, v)
    return tensor


def _twist(tensor: np.ndarray) -> np.ndarray:
    """F(i_2, ..., i_(2 ell), i_1) from a table indexed (i_1, ..., i_(2 ell))."""
    return np.moveaxis(tensor, 0, -1)


def contract_table(table: np.ndarray, a_list: Sequence[np.ndarray]) -> complex:
    """sum over i of F(i) prod over lambda of A_lambda(i_(2 lambda - 1), i_(2 lambda))."""
    operands: list = [table, list(range(table.ndim))]
    for k, a in enumerate(a_list):
        operands.extend([a, [2 * k, 2 * k + 1]])
    return complex(np.einsum(*operands, [], optimize=True))


def _trace_product(v_list: Sequence[np.ndarray], a_list: Sequence[np.ndarray]) -> complex:
    product = np.eye(a_list[0].shape[0], dtype=np.complex128)
    for v, a in zip(v_list, a_list):
        product = product @ v @ a
    return complex(np.trace(product))


def _check_pattern(pattern: Sequence[int], count: int, ell: int) -> List[int]:
    pattern = [int(a) for a in pattern]
    if len(pattern) != ell:
        raise ShapeError(f"pattern has {len(pattern)} entries for {ell} matrices")
    if any(not 0 <= a < count for a in pattern):
        raise ValidationError(f"pattern {pattern} refers to unitaries outside 0..{count - 1}")
    return pattern


def verify_twist_identity(
    unitaries: Sequence[MatrixLike],
    a_list,
    pattern: Sequence[int],
    trials: Optional[int] = None,
    rng: Optional[SeededRng] = None,
    workers: Optional[int] = None,
) -> VerificationReport:
    """
    Check sum over i of F(i) A(i) = E tr(V_1 A_1 ... V_ell A_ell) for the fake Haar family.

    F is the twisted table of entry products of V_lambda = U_(a_(lambda-1))* U_(a_lambda).
    With ``trials`` None both sides are exact group averages (n <= MAX_GROUP_N)
    and must agree to EXACT_TOL; otherwise each side is estimated on its own
    stream and they must agree within five combined standard errors.
    """
    matrices = TraceZeroMatrixSet.of(a_list)
    n, ell = matrices.n, matrices.ell
    arrays = matrices.arrays()
    fixed = _unitaries(unitaries, n)
    pattern = _check_pattern(pattern, len(fixed), ell)
    if n ** (2 * ell) > config.MAX_ENUMERATION:
        raise CapacityError(f"N^(2 ell) = {n}^{2 * ell} exceeds the enumeration cap")
    report = VerificationReport("twist_identity")
    scale = max(1.0, matrices.hs_product())

    if trials is None:
        group = _group(n)
        table = np.zeros((n,) * (2 * ell), dtype=np.complex128)
        direct = 0.0 + 0.0j
        for w in group:
            v = _twisted_matrices(fixed, pattern, w)
            table += _entry_tensor(v)
            direct += _trace_product(v, arrays)
        table = _twist(table / len(group))
        direct /= len(group)
        contracted = contract_table(table, arrays)
        gap = abs(contracted - direct)
        chi_ok = chichi_table_check(table, n, ell)
        report.bound_used = config.EXACT_TOL * scale
        report.record(
            gap <= config.EXACT_TOL * scale and chi_ok,
            table_side=[contracted.real, contracted.imag],
            trace_side=[direct.real, direct.imag],
            gap=gap,
            chi_class=chi_ok,
        )
        return report

    if trials < 2:
        raise ValidationError(f"need at least 2 trials, got {trials}")
    rng = rng or SeededRng(config.DEFAULT_SEED)

    def table_trial(_index: int, generator: np.random.Generator) -> np.ndarray:
        return _entry_tensor(_twisted_matrices(fixed, pattern, sample_signed_permutation(n, generator)))

    def trace_trial(_index: int, generator: np.random.Generator) -> complex:
        return _trace_product(_twisted_matrices(fixed, pattern, sample_signed_permutation(n, generator)), arrays)

    tables = run_trials(table_trial, trials, rng.derive(0), workers)
    table = _twist(np.mean(tables, axis=0))
    contracted = contract_table(table, arrays)
    per_table = np.array([contract_table(_twist(t), arrays) for t in tables])
    _, table_se = mean_and_se(per_table)
    traces = np.array(run_trials(trace_trial, trials, rng.derive(1), workers))
    direct, trace_se = mean_and_se(traces)
    spread = float(np.hypot(table_se, trace_se))
    gap = abs(contracted - complex(direct))
    ok = gap <= FIVE_SIGMA * spread if spread > 0 else gap <= config.EXACT_TOL * scale
    report.bound_used = FIVE_SIGMA * spread
    report.record(
        ok,
        table_side=[contracted.real, contracted.imag],
        trace_side=[complex(direct).real, complex(direct).imag],
        gap=gap,
        se=spread,
    )
    logger.debug(f"twist identity over {trials} trials: gap {gap:.3e}, 5 sigma {FIVE_SIGMA * spread:.3e}")
    return report


def verify_less_jarring_recursion(
    unitaries: Sequence[MatrixLike], a_list, pattern: Sequence[int]
) -> VerificationReport:
    """
    Check the reduction of a pattern with i_ell = i_1 to shorter patterns, exactly.

    phi_(i_1..i_ell)(A_1, ..., A_ell) equals
    phi_(i_1..i_(ell-1))(A_ell A_1 - c I, A_2, ..., A_(ell-1)) + c phi_(i_2..i_(ell-1))(A_2, ..., A_(ell-1))
    with c = tr(A_ell A_1) / N, every phi an exact group average.
    """
    matrices = TraceZeroMatrixSet.of(a_list)
    n, ell = matrices.n, matrices.ell
    fixed = _unitaries(unitaries, n)
    pattern = _check_pattern(pattern, len(fixed), ell)
    if ell < 3:
        raise ValidationError(f"the recursion needs ell >= 3, got {ell}")
    if pattern[-1] != pattern[0]:
        raise ValidationError(f"the recursion needs i_ell = i_1, got pattern {pattern}")
    if any(a == b for a, b in zip(pattern, pattern[1:])):
        raise ValidationError(f"adjacent pattern entries must differ: {pattern}")
    _group(n)

    a = matrices.arrays()
    v = [fixed[k] for k in pattern]
    c = complex(np.trace(a[-1] @ a[0])) / n
    merged = a[-1] @ a[0] - c * np.eye(n)
    lhs = _group_average(v, a, n)
    rhs = _group_average(v[:-1], [merged] + a[1:-1], n) + c * _group_average(v[1:-1], a[1:-1], n)
    gap = abs(lhs - rhs)
    tol = config.EXACT_TOL * max(1.0, matrices.hs_product())
    report = VerificationReport("less_jarring_recursion", bound_used=tol)
    report.record(gap <= tol, lhs=[lhs.real, lhs.imag], rhs=[rhs.real, rhs.imag], gap=gap)
    return report
