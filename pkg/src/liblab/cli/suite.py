"""The verification suite: exact identities plus small statistical sweeps, run as one experiment."""
from typing import Callable, List, Optional

import numpy as np

from ..config import config
from ..ensembles.families import normalized_hadamard
from ..free.compression import compression_law, law_moments_by_quadrature
from ..free.mixed import free_additive_moments, free_multiplicative_moments
from ..free.moments import MomentSequence
from ..partitions.chi import clump_classes, part_chichi
from ..partitions.fibonacci import fibonacci_moment, partition_weights
from ..partitions.lattice import SetPartition, crude_bounds_check, mobius_inversion_check
from ..utils.logger import get_logger, log_stage
from ..verify.bounds import (
    theorem_fake_sweep,
    verify_distinct_summation,
    verify_fibonacci_whittle,
    verify_sum_product,
    yin_sweep,
)
from ..verify.group import verify_less_jarring_recursion, verify_twist_identity
from ..verify.report import VerificationReport, random_trace_zero
from .report import ExperimentReport
from .settings import ExperimentConfig

logger = get_logger(__name__)

MOBIUS_ELLS = range(1, 8)
CRUDE_ELLS = range(1, 9)
FIBONACCI_TARGETS = (0, 1, 1, 2, 3, 5, 8, 13, 21, 34)
CHICHI_COUNTS = {2: 0, 4: 3}
WEIGHT_N = 4
WEIGHT_ELLS = (1, 2, 3)
GROUP_NS = (2, 3)
GROUP_INSTANCES = 100
SWEEP_NS = (4, 8, 12, 16)
MIN_SWEEP_INSTANCES = 100
YIN_INSTANCES = 20
WHITTLE_NS = (16, 64, 256)
WHITTLE_TRIALS = 2000
CONSISTENCY_TRACES = (0.3, 0.5, 0.7)
CONSISTENCY_ORDER = 6
CONSISTENCY_TOL = 1e-5
ARCSINE_MOMENTS = (0.0, 2.0, 0.0, 6.0, 0.0, 20.0)
ARCSINE_TOL = 1e-10

MobiusTable = Callable[[SetPartition], int]


def _add_verification(report: ExperimentReport, result: VerificationReport) -> None:
    growth = [d["growth"] for d in result.details if "growth" in d]
    detail = {
        "instances_checked": result.instances_checked,
        "max_ratio": result.max_ratio,
        "bound_used": result.bound_used,
    }
    if growth:
        detail["growth"] = growth
    report.add_check(result.name, result.passed, **detail)


def _group_unitaries(n: int) -> List[np.ndarray]:
    """I, H/sqrt(n) and D H/sqrt(n) with alternating signs D."""
    h = normalized_hadamard("sylvester" if n == 2 else "dft", n)
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return [np.eye(n, dtype=np.complex128), np.array(h), signs[:, None] * h]


def _combinatorics(report: ExperimentReport, mobius: Optional[MobiusTable]) -> None:
    failing = [ell for ell in MOBIUS_ELLS if not mobius_inversion_check(ell, mobius)]
    report.add_check("mobius_inversion", not failing, ells=list(MOBIUS_ELLS), failing=failing)

    failing = [ell for ell in CRUDE_ELLS if not crude_bounds_check(ell)]
    report.add_check("crude_bounds", not failing, ells=list(CRUDE_ELLS), failing=failing)

    moments = tuple(fibonacci_moment(k) for k in range(1, len(FIBONACCI_TARGETS) + 1))
    report.add_check("fibonacci_moments", moments == FIBONACCI_TARGETS, moments=list(moments))

    counts = {two_ell: len(part_chichi(two_ell)) for two_ell in CHICHI_COUNTS}
    report.add_check("part_chichi_counts", counts == CHICHI_COUNTS, counts=counts)

    lowest_off, lowest_on = [], []
    for ell in WEIGHT_ELLS:
        classes = clump_classes(WEIGHT_N, ell)
        codes, inverse = np.unique(classes.codes, return_inverse=True)
        table = partition_weights(codes, 2 * ell)
        weights = np.array([table[int(c)] for c in codes])[inverse.reshape(-1)]
        lowest_off.append(int(weights.min()))
        lowest_on.append(int(weights[classes.chichi].min()) if classes.chichi.any() else None)
    ok = all(w >= 0 for w in lowest_off) and all(w is None or w >= 1 for w in lowest_on)
    report.add_check("fibonacci_weight_positivity", ok, n=WEIGHT_N, min_weight=lowest_off, min_chichi_weight=lowest_on)


def _free_calculus(report: ExperimentReport) -> None:
    worst = 0.0
    for alpha in CONSISTENCY_TRACES:
        for beta in CONSISTENCY_TRACES:
            product = free_multiplicative_moments(
                MomentSequence.bernoulli(alpha, CONSISTENCY_ORDER),
                MomentSequence.bernoulli(beta, CONSISTENCY_ORDER),
                CONSISTENCY_ORDER,
            )
            reference = law_moments_by_quadrature(compression_law(alpha, beta), CONSISTENCY_ORDER)
            gap = float(np.max(np.abs(np.subtract(product.moments, reference.moments))))
            worst = max(worst, gap)
    report.add_check(
        "free_calculus_consistency",
        worst <= CONSISTENCY_TOL,
        traces=list(CONSISTENCY_TRACES),
        order=CONSISTENCY_ORDER,
        max_gap=worst,
        bound_used=CONSISTENCY_TOL,
    )

    sign = MomentSequence.symmetric_bernoulli(len(ARCSINE_MOMENTS))
    arcsine = free_additive_moments(sign, sign, len(ARCSINE_MOMENTS))
    gap = float(np.max(np.abs(np.subtract(arcsine.moments, ARCSINE_MOMENTS))))
    report.add_check("free_additive_arcsine", gap <= ARCSINE_TOL, moments=list(arcsine.moments), max_gap=gap)


def _tables(generator: np.random.Generator, ell: int, n: int, centered: bool) -> np.ndarray:
    tables = generator.standard_normal((ell, n)) + 1j * generator.standard_normal((ell, n))
    if centered:
        tables -= tables.mean(axis=1, keepdims=True)
    return tables


def _summations(report: ExperimentReport, cfg: ExperimentConfig) -> None:
    generator = cfg.rng.derive(1).generator()
    result = VerificationReport("sum_product")
    for ell in (2, 3, 4):
        result.merge(verify_sum_product(_tables(generator, ell, 5, centered=False)))
    _add_verification(report, result)

    result = VerificationReport("distinct_summation")
    for excluded in ((), (0,), (0, 3)):
        result.merge(verify_distinct_summation(_tables(generator, 3, 6, centered=True), excluded))
    _add_verification(report, result)


def _group_identities(report: ExperimentReport, cfg: ExperimentConfig) -> None:
    generator = cfg.rng.derive(2).generator()
    twist = VerificationReport("twist_identity")
    recursion = VerificationReport("less_jarring_recursion")
    for n in GROUP_NS:
        unitaries = _group_unitaries(n)
        for _ in range(GROUP_INSTANCES):
            for pattern in ((0, 1), (0, 1, 0)):
                a_list = [random_trace_zero(n, generator) for _ in pattern]
                twist.merge(verify_twist_identity(unitaries, a_list, pattern))
            for pattern in ((0, 1, 0), (0, 1, 2, 0)):
                a_list = [random_trace_zero(n, generator) for _ in pattern]
                recursion.merge(verify_less_jarring_recursion(unitaries, a_list, pattern))
    twist.bound_used = recursion.bound_used = config.EXACT_TOL
    _add_verification(report, twist)
    _add_verification(report, recursion)


def run_verification_suite(cfg: ExperimentConfig, mobius: Optional[MobiusTable] = None) -> ExperimentReport:
    """
    Run every exact check and the small N-sweeps, one named check each.

    Args:
        cfg: Settings; only the seed, trial count and worker count are used
        mobius: Replacement table of mu(0, .) for the inversion check

    Returns:
        ExperimentReport whose checks name each identity or estimate
    """
    report = ExperimentReport(cfg)
    with log_stage(logger, "exact combinatorics"):
        _combinatorics(report, mobius)
        _summations(report, cfg)
        _free_calculus(report)
    with log_stage(logger, "group identities"):
        _group_identities(report, cfg)

    instances = max(cfg.trials, MIN_SWEEP_INSTANCES)
    with log_stage(logger, "N-sweeps"):
        _add_verification(report, theorem_fake_sweep(SWEEP_NS, 2, instances, cfg.rng.derive(3), workers=cfg.workers))
        _add_verification(report, yin_sweep(SWEEP_NS, 2, YIN_INSTANCES, cfg.rng.derive(4), workers=cfg.workers))
        _add_verification(report, verify_fibonacci_whittle(WHITTLE_NS, WHITTLE_TRIALS, cfg.rng.derive(5)))
    logger.info(f"verification suite: {sum(c['passed'] for c in report.checks)}/{len(report.checks)} checks passed")
    return report
