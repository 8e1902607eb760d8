"""Desk-scale experiments: liberation sweeps, free convolution limits, compression and concentration."""
import math
import time
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import config
from ..ensembles.families import family_pair_sampler, liberating_family, normalized_hadamard, unitary_sampler
from ..ensembles.laws import DiagonalLaw
from ..ensembles.signed import draw_signed_transposition, sample_signed_permutation
from ..ensembles.statistics import entry_moment_statistic, khinchin_bound
from ..errors import ShapeError, ValidationError
from ..free.compression import compression_density, compression_law, law_moments_by_quadrature
from ..free.mixed import free_additive_moments, free_multiplicative_moments
from ..free.moments import MomentSequence
from ..linalg.hadamard import hadamard_matrix
from ..linalg.matrix import ComplexMatrix, MatrixLike, as_array, dump_matrix
from ..linalg.spectra import SpectralSample, edf_distance, edf_eval, hermitian_eigenvalues, numerical_rank
from ..utils.logger import get_logger
from ..utils.parallel import run_trials
from ..utils.stats import freedman_diaconis_histogram, growth_verdict, mean_and_se, within_tolerance
from ..verify.report import TraceZeroMatrixSet, random_trace_zero
from .report import ExperimentReport
from .settings import ExperimentConfig
from .suite import run_verification_suite

logger = get_logger(__name__)

DECILES = np.linspace(0.1, 0.9, 9)
TAIL_LEVELS = (0.01, 0.02, 0.05)
PERTURBATION_RANK = 8
ENTRY_MOMENT_ELL = 4

Builder = Callable[[np.random.Generator], np.ndarray]


def _hermitize(h: np.ndarray) -> np.ndarray:
    return (h + h.conj().T) / 2.0


def _spectrum(h: np.ndarray) -> SpectralSample:
    return hermitian_eigenvalues(ComplexMatrix(_hermitize(h), hermitian=True))


def _spectral_trials(cfg: ExperimentConfig, build: Builder) -> np.ndarray:
    """Sorted eigenvalues of build(generator), one row per trial."""

    def trial(_index: int, generator: np.random.Generator) -> np.ndarray:
        return _spectrum(build(generator)).eigenvalues

    return np.array(run_trials(trial, cfg.trials, cfg.rng.derive(0), cfg.workers))


def _record_moments(
    report: ExperimentReport, eigenvalues: np.ndarray, targets: MomentSequence, abs_tol: Optional[float] = None
) -> None:
    order = targets.order
    per_trial = np.array([MomentSequence.from_samples(row, order).moments for row in eigenvalues])
    means, ses = mean_and_se(per_trial)
    report.moments = [float(v) for v in means]
    report.se = [float(v) for v in ses]
    report.targets = [float(v) for v in targets.moments]
    for k, (estimate, se, target) in enumerate(zip(report.moments, report.se, report.targets), start=1):
        report.add_check(
            f"moment_{k}",
            within_tolerance(estimate, target, se, abs_tol),
            estimate=estimate,
            se=se,
            target=target,
        )


def _operands(cfg: ExperimentConfig, matrices: Optional[Tuple[MatrixLike, MatrixLike]]) -> Tuple[np.ndarray, np.ndarray]:
    """A and B as dense Hermitian arrays: explicit matrices, else the configured diagonal laws."""
    if matrices is None:
        law_a, law_b = cfg.laws()
        return (
            np.diag(law_a.deterministic_diagonal(cfg.n)).astype(np.complex128),
            np.diag(law_b.deterministic_diagonal(cfg.n)).astype(np.complex128),
        )
    a, b = (ComplexMatrix(as_array(m), hermitian=True).array for m in matrices)
    for name, m in (("A", a), ("B", b)):
        if m.shape != (cfg.n, cfg.n):
            raise ShapeError(f"{name} has shape {m.shape}, expected ({cfg.n}, {cfg.n})")
    return a, b


def _marginal(m: np.ndarray, order: int) -> MomentSequence:
    return MomentSequence.from_samples(_spectrum(m).eigenvalues, order)


def run_sum_experiment(
    cfg: ExperimentConfig, matrices: Optional[Tuple[MatrixLike, MatrixLike]] = None
) -> ExperimentReport:
    """
    ESD moments of A + U B U* against the free additive convolution of the marginals.

    Args:
        cfg: Experiment settings; ``unitary`` picks fake, unsigned or Haar U
        matrices: Optional explicit Hermitian (A, B) replacing the diagonal laws

    Returns:
        ExperimentReport with moment checks and the pooled-spectrum histogram
    """
    a, b = _operands(cfg, matrices)
    sampler = unitary_sampler(cfg.unitary, cfg.hadamard_for(cfg.n), cfg.n)

    def build(generator: np.random.Generator) -> np.ndarray:
        u = sampler(generator)
        return a + u @ b @ u.conj().T

    order = cfg.moment_order
    targets = free_additive_moments(_marginal(a, order), _marginal(b, order), order)
    eigenvalues = _spectral_trials(cfg, build)
    report = ExperimentReport(cfg, histogram=freedman_diaconis_histogram(eigenvalues))
    _record_moments(report, eigenvalues, targets)
    return report


def _square_root(a: np.ndarray) -> np.ndarray:
    spectrum, vectors = hermitian_eigenvalues(ComplexMatrix(a, hermitian=True), eigenvectors=True)
    lowest = float(spectrum.eigenvalues[0])
    if lowest < -config.PSD_TOL:
        raise ValidationError(f"A must be nonnegative definite; smallest eigenvalue is {lowest:.3e}")
    roots = np.sqrt(np.clip(spectrum.eigenvalues, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


def run_product_experiment(
    cfg: ExperimentConfig, matrices: Optional[Tuple[MatrixLike, MatrixLike]] = None
) -> ExperimentReport:
    """ESD moments of A^(1/2) U B U* A^(1/2) against the free multiplicative convolution."""
    a, b = _operands(cfg, matrices)
    root = _square_root(a)
    sampler = unitary_sampler(cfg.unitary, cfg.hadamard_for(cfg.n), cfg.n)

    def build(generator: np.random.Generator) -> np.ndarray:
        u = sampler(generator)
        return root @ u @ b @ u.conj().T @ root

    order = cfg.moment_order
    targets = free_multiplicative_moments(_marginal(a, order), _marginal(b, order), order)
    eigenvalues = _spectral_trials(cfg, build)
    report = ExperimentReport(cfg, histogram=freedman_diaconis_histogram(eigenvalues))
    _record_moments(report, eigenvalues, targets)
    return report


def _iid_laws(cfg: ExperimentConfig) -> Tuple[DiagonalLaw, DiagonalLaw]:
    law_x, law_y = cfg.laws()
    if cfg.coupling != "equal":
        return law_x, law_y
    if cfg.law_b is not None and law_y != law_x:
        raise ValidationError(f"equal coupling needs one law for X and Y, got {law_x} and {law_y}")
    return law_x, law_x


def run_hadamard_iid_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """
    ESD moments of X + (1/N) H Y H* (or X^(1/2) (1/N) H Y H* X^(1/2)) for i.i.d. diagonals.

    H is deterministic, so the only randomness is in the diagonals. With
    ``coupling == "equal"`` the same draw serves as X and Y.
    """
    n = cfg.n
    law_x, law_y = _iid_laws(cfg)
    product = cfg.operation == "product"
    if product and not law_x.is_nonnegative:
        raise ValidationError(f"the product needs a nonnegative X law, got {law_x}")
    h = normalized_hadamard(cfg.hadamard_for(n), n)
    equal = cfg.coupling == "equal"

    def build(generator: np.random.Generator) -> np.ndarray:
        x = law_x.sample_diagonal(n, generator)
        y = x if equal else law_y.sample_diagonal(n, generator)
        m = (h * y) @ h.conj().T
        if product:
            root = np.sqrt(x)
            return root[:, None] * m * root[None, :]
        return m + np.diag(x)

    order = cfg.moment_order
    convolve = free_multiplicative_moments if product else free_additive_moments
    targets = convolve(law_x.moments(order), law_y.moments(order), order)
    eigenvalues = _spectral_trials(cfg, build)
    report = ExperimentReport(cfg, histogram=freedman_diaconis_histogram(eigenvalues))
    _record_moments(report, eigenvalues, targets)
    return report


def run_compression_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """
    Spectrum of (1/N) X H Y H* X for Bernoulli(alpha) and Bernoulli(beta) diagonals.

    Eigenvalues below ATOM_TOL count toward the atom at 0 and those above
    1 - ATOM_TOL toward the atom at 1; the rest form the continuous part,
    whose histogram is reported next to the limiting density at bin centres.
    """
    n = cfg.n
    alpha, beta = cfg.compression_params
    law = compression_law(alpha, beta)
    x_law, y_law = DiagonalLaw("bernoulli", alpha), DiagonalLaw("bernoulli", beta)
    h = normalized_hadamard(cfg.hadamard_for(n), n)

    def build(generator: np.random.Generator) -> np.ndarray:
        x = x_law.sample_diagonal(n, generator)
        y = y_law.sample_diagonal(n, generator)
        m = (h * y) @ h.conj().T
        return x[:, None] * m * x[None, :]

    targets = law_moments_by_quadrature(law, cfg.moment_order)
    eigenvalues = _spectral_trials(cfg, build)
    low = eigenvalues < config.ATOM_TOL
    high = eigenvalues > 1.0 - config.ATOM_TOL
    continuous = eigenvalues[~(low | high)]
    histogram = freedman_diaconis_histogram(continuous)
    edges = np.asarray(histogram.edges)
    centres = (edges[:-1] + edges[1:]) / 2.0 if edges.size else edges

    report = ExperimentReport(cfg, histogram=histogram)
    for name, mask, target in (("atom0", low, law.atom0), ("atom1", high, law.atom1)):
        mass, se = mean_and_se(mask.mean(axis=1))
        report.add_check(
            name,
            within_tolerance(float(mass), target, float(se), config.ATOM_MASS_TOL),
            estimate=float(mass),
            se=float(se),
            target=target,
        )
    lowest, highest = float(eigenvalues.min()), float(eigenvalues.max())
    report.add_check(
        "support",
        lowest >= -config.ATOM_TOL and highest <= 1.0 + config.ATOM_TOL,
        min=lowest,
        max=highest,
    )
    _record_moments(report, eigenvalues, targets, config.ATOM_MASS_TOL)
    report.data = {
        "law": law.to_dict(),
        "continuous_mass": float(continuous.size / eigenvalues.size),
        "bin_centres": centres,
        "reference_density": np.atleast_1d(compression_density(law, centres)) if centres.size else [],
    }
    return report


def _concentration_builder(operation: str, a: np.ndarray, b: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    if operation == "product":
        return lambda v: _hermitize(a @ v @ b @ v.conj().T @ a.conj().T)
    return lambda v: _hermitize(a + v @ b @ v.conj().T)


def _concentration_at(
    cfg: ExperimentConfig, index: int, n: int, report: ExperimentReport
) -> Tuple[dict, SpectralSample]:
    law_a, law_b = cfg.laws()
    a = np.diag(law_a.deterministic_diagonal(n)).astype(np.complex128)
    b = np.diag(law_b.deterministic_diagonal(n)).astype(np.complex128)
    build = _concentration_builder(cfg.operation, a, b)
    sampler = unitary_sampler(cfg.unitary, cfg.hadamard_for(n), n)
    stream = cfg.rng.derive(index)

    pilot = _spectrum(build(sampler(stream.derive(0).generator())))
    points = np.quantile(pilot.eigenvalues, DECILES)
    check_draws = min(cfg.trials, config.CONCENTRATION_CHECK_DRAWS)

    def trial(k: int, generator: np.random.Generator) -> Tuple[np.ndarray, int, int]:
        u = sampler(generator)
        w = sample_signed_permutation(n, generator)
        first = build(w.conjugate_adjoint(u))
        spectrum = _spectrum(first)
        values = np.asarray(edf_eval(spectrum, points), dtype=float)
        if k >= check_draws:
            return values, -1, -1
        # H'' conjugates by T W, a signed permutation differing from W in two rows
        t = draw_signed_transposition(n, generator).as_signed_permutation()
        second = build(t.compose(w).conjugate_adjoint(u))
        rank = numerical_rank(first - second)
        return values, rank, edf_distance(spectrum, _spectrum(second)).count

    results = run_trials(trial, cfg.trials, stream.derive(1), cfg.workers)
    values = np.array([r[0] for r in results])
    ranks = [r[1] for r in results[:check_draws]]
    gaps = [r[2] for r in results[:check_draws]]

    variance = values.var(axis=0, ddof=1)
    scaled = float(variance.max() * n / math.log(n))
    deviation = np.abs(values - values.mean(axis=0))
    tails = {f"{level:g}": float((deviation > level).mean(axis=0).max()) for level in TAIL_LEVELS}
    report.add_check(f"rank_n{n}", max(ranks) <= PERTURBATION_RANK, max_rank=max(ranks), draws=check_draws)
    report.add_check(
        f"edf_gap_n{n}",
        max(gaps) <= PERTURBATION_RANK,
        max_count=max(gaps),
        max_distance=max(gaps) / n,
        draws=check_draws,
    )
    logger.debug(f"concentration N={n}: max Var N/log N = {scaled:.4f}, max rank {max(ranks)}")
    row = {
        "n": n,
        "points": points,
        "edf_mean": values.mean(axis=0),
        "edf_variance": variance,
        "scaled_variance": scaled,
        "tail_frequency": tails,
    }
    return row, pilot


def run_concentration_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """
    Variance of the empirical distribution function of H+ = A + U B U* (or H x) over an N-sweep.

    Each draw also applies a random signed transposition T to the conjugating
    W and checks that the perturbed matrix differs by rank at most 8 and its
    EDF by at most 8/N. The sweep passes when max Var(F(x)) N / log N stays
    within CONCENTRATION_SPREAD from its smallest to its largest value.
    """
    if cfg.trials < 2:
        raise ValidationError(f"the variance estimate needs at least 2 trials, got {cfg.trials}")
    report = ExperimentReport(cfg)
    rows: List[dict] = []
    pilot: Optional[SpectralSample] = None
    for index, n in enumerate(cfg.ns):
        row, pilot = _concentration_at(cfg, index, n, report)
        rows.append(row)
    scaled = [row["scaled_variance"] for row in rows]
    top, bottom = max(scaled), min(scaled)
    spread = top / bottom if bottom > 0 else (1.0 if top == 0 else math.inf)
    report.add_check(
        "variance_scaling",
        spread <= config.CONCENTRATION_SPREAD,
        spread=spread,
        limit=config.CONCENTRATION_SPREAD,
        values=scaled,
    )
    if pilot is not None:
        report.histogram = freedman_diaconis_histogram(pilot.eigenvalues)
    report.data = {"sweep": rows}
    return report


def _liberation_pattern(pattern: Sequence[int], members: int) -> Tuple[int, ...]:
    pattern = tuple(int(i) for i in pattern)
    if len(pattern) < 2:
        raise ValidationError(f"a word needs at least two letters, got pattern {pattern}")
    if any(not 1 <= i <= members for i in pattern):
        raise ValidationError(f"pattern {pattern} refers to members outside 1..{members}")
    if any(pattern[k] == pattern[(k + 1) % len(pattern)] for k in range(len(pattern))):
        raise ValidationError(f"cyclically adjacent pattern entries must differ: {pattern}")
    return pattern


def run_liberation(cfg: ExperimentConfig, matrices: Optional[Sequence[MatrixLike]] = None) -> ExperimentReport:
    """
    |E tr(U_i1 A_1 U_i1* ... U_il A_l U_il*)| over an N-sweep for the liberating family.

    Args:
        cfg: Settings; ``pattern`` holds 1-based labels into W, HW, D1HW, ...
        matrices: Optional fixed trace-zero A_1..A_l; by default each N draws
            Hermitian Gaussian ones scaled to operator norm 1

    Returns:
        ExperimentReport with a growth verdict and an entry-moment check
    """
    pattern = _liberation_pattern(cfg.pattern, cfg.family_size + 2)
    ell = len(pattern)
    fixed = None
    ns = cfg.ns
    if matrices is not None:
        fixed = TraceZeroMatrixSet.of(matrices)
        if fixed.ell != ell:
            raise ShapeError(f"{fixed.ell} matrices for a pattern of length {ell}")
        ns = (fixed.n,)

    report = ExperimentReport(cfg)
    rows, values, ses = [], [], []
    h = None
    for index, n in enumerate(ns):
        stream = cfg.rng.derive(index)
        if fixed is None:
            generator = stream.derive(0).generator()
            mats = TraceZeroMatrixSet(
                tuple(random_trace_zero(n, generator, hermitian=True, normalize="operator") for _ in range(ell))
            )
        else:
            mats = fixed
        arrays = mats.arrays()
        h = hadamard_matrix(cfg.hadamard_for(n), n).array

        def trial(_k: int, generator: np.random.Generator, n=n, h=h, arrays=arrays) -> complex:
            family = liberating_family(h, cfg.family_size, generator, validate=False)
            product = np.eye(n, dtype=np.complex128)
            for label, a in zip(pattern, arrays):
                u = family.members[label - 1]
                product = product @ u @ a @ u.conj().T
            return complex(np.trace(product))

        traces = np.array(run_trials(trial, cfg.trials, stream.derive(1), cfg.workers))
        mean, se = mean_and_se(traces)
        values.append(abs(complex(mean)))
        ses.append(float(se))
        rows.append({"n": n, "mean": complex(mean), "abs_mean": values[-1], "se": ses[-1], "trivial_bound": n})
        logger.debug(f"liberation N={n}: |E tr| = {values[-1]:.4f} +- {ses[-1]:.4f}")

    verdict = growth_verdict(ns, values, ses)
    report.add_check("bounded_growth", verdict.passed, **{k: v for k, v in verdict.to_dict().items() if k != "passed"})

    labels = ("HW", "D1HW") if cfg.family_size >= 1 else ("W", "HW")
    estimate = entry_moment_statistic(
        family_pair_sampler(h, labels, cfg.family_size),
        ENTRY_MOMENT_ELL,
        max(cfg.trials, config.MIN_ENTRY_MOMENT_TRIALS),
        cfg.rng.derive(len(ns)),
        workers=cfg.workers,
    )
    bound = khinchin_bound(ENTRY_MOMENT_ELL)
    report.add_check(
        "entry_moment",
        estimate.value <= bound + config.Z_SCORE * estimate.se,
        pair=list(labels),
        bound=bound,
        **estimate.to_dict(),
    )
    report.data = {"sweep": rows}
    return report


def dump_hadamard(cfg: ExperimentConfig) -> Path:
    """Write the Hadamard matrix of the largest configured N to ``cfg.dump``."""
    n = max(cfg.ns)
    return dump_matrix(hadamard_matrix(cfg.hadamard_for(n), n), cfg.dump)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Dispatch on ``cfg.experiment`` and stamp the wall time when requested."""
    runners = {
        "liberate": run_liberation,
        "sum": run_sum_experiment,
        "product": run_product_experiment,
        "hadamard-iid": run_hadamard_iid_experiment,
        "compress": run_compression_experiment,
        "concentrate": run_concentration_experiment,
        "verify": run_verification_suite,
    }
    logger.info(f"Running {cfg.experiment} at N={list(cfg.ns)} with {cfg.trials} trials, seed {cfg.seed}")
    start = time.perf_counter()
    report = runners[cfg.experiment](cfg)
    if cfg.timing:
        report.wall_time_ms = round((time.perf_counter() - start) * 1000.0, 3)
    status = "passed" if report.passed else f"failed {report.failed_checks}"
    logger.info(f"{cfg.experiment}: {len(report.checks)} checks {status}")
    return report
