"""Command-line entry point for liberation-lab experiments."""
import argparse
import sys
from typing import List, Optional, Sequence

from .. import __version__
from ..config import config
from ..errors import CapacityError, ValidationError
from ..utils.logger import setup_logger
from .experiments import (
    dump_hadamard,
    run_compression_experiment,
    run_concentration_experiment,
    run_experiment,
    run_hadamard_iid_experiment,
    run_liberation,
    run_product_experiment,
    run_sum_experiment,
)
from .report import ExperimentReport
from .settings import EXPERIMENTS, ExperimentConfig
from .suite import run_verification_suite

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "build_parser",
    "config_from_args",
    "main",
    "run_compression_experiment",
    "run_concentration_experiment",
    "run_experiment",
    "run_hadamard_iid_experiment",
    "run_liberation",
    "run_product_experiment",
    "run_sum_experiment",
    "run_verification_suite",
]


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=512, help="Matrix dimension N (default: 512)")
    parser.add_argument(
        "--trials", type=int, default=config.DEFAULT_TRIALS, help=f"Monte Carlo trials (default: {config.DEFAULT_TRIALS})"
    )
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Root seed of every random stream")
    parser.add_argument("--moments", type=int, default=6, dest="moment_order", help="Moment order K (default: 6)")
    parser.add_argument("--alpha", type=float, default=None, help="Trace of the X projection (compress)")
    parser.add_argument("--beta", type=float, default=None, help="Trace of the Y projection (compress)")
    parser.add_argument(
        "--hadamard",
        choices=["sylvester", "dft"],
        default=None,
        help="Hadamard family (default: sylvester for powers of two, else dft)",
    )
    parser.add_argument("--out", type=str, default=None, help="Write the report here instead of stdout")
    parser.add_argument("--format", choices=["json", "csv"], default="json", dest="output_format")
    parser.add_argument("--sweep", type=_int_list, default=[], help="Comma-separated N values, e.g. 64,128,256")
    parser.add_argument("--coupling", choices=["independent", "equal"], default="independent")
    parser.add_argument("--operation", choices=["sum", "product"], default="sum")
    parser.add_argument("--unitary", choices=["fake", "unsigned", "haar"], default="fake")
    parser.add_argument("--law-a", type=str, default=None, help="Law of A (or X): zero, one, rademacher, bernoulli:p")
    parser.add_argument("--law-b", type=str, default=None, help="Law of B (or Y)")
    parser.add_argument("--pattern", type=_int_list, default=[1, 2], help="1-based family labels, e.g. 1,2")
    parser.add_argument("--family-size", type=int, default=0, help="Number of D_i H W members (liberate)")
    parser.add_argument("--dump", type=str, default=None, help="Write the Hadamard matrix used as JSON")
    parser.add_argument("--timing", action="store_true", help="Record wall time in the report")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads (default: LIBLAB_THREADS)")
    parser.add_argument("--log-level", type=str, default=None, help=f"Log level (default: {config.LOG_LEVEL})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liblab",
        description="liberation-lab - fake Haar unitaries, free convolution limits and exact partition checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s sum --n 512 --trials 50                  # A + UBU* against the free additive convolution
  %(prog)s hadamard-iid --n 500 --hadamard dft      # X + (1/N)HYH* with i.i.d. diagonals
  %(prog)s compress --alpha 0.3 --beta 0.9          # atoms and density of (1/N)XHYH*X
  %(prog)s liberate --sweep 64,128,256,512 --trials 200
  %(prog)s concentrate --sweep 64,128,256,512 --trials 2000
  %(prog)s verify --out report.json                 # exact identities and small sweeps
        """,
    )
    parser.add_argument("--version", action="version", version=f"liberation-lab v{__version__}")
    subcommands = parser.add_subparsers(dest="experiment", required=True, metavar="experiment")
    for name in EXPERIMENTS:
        _add_common(subcommands.add_parser(name, help=f"Run the {name} experiment"))
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        experiment=args.experiment,
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        moment_order=args.moment_order,
        alpha=args.alpha,
        beta=args.beta,
        hadamard=args.hadamard,
        output_path=args.out,
        output_format=args.output_format,
        sweep=tuple(args.sweep),
        coupling=args.coupling,
        operation=args.operation,
        unitary=args.unitary,
        law_a=args.law_a,
        law_b=args.law_b,
        pattern=tuple(args.pattern),
        family_size=args.family_size,
        dump=args.dump,
        timing=args.timing,
        workers=args.workers,
        log_level=args.log_level,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse flags, run one experiment and emit its report.

    Returns:
        0 when every check passes, 1 on failed checks or unexpected errors,
        2 on invalid input or exceeded capacity caps
    """
    args = build_parser().parse_args(argv)
    try:
        logger = setup_logger("liblab", config.LOG_FILE or None, level=args.log_level)
    except ValueError as e:
        print(f"liblab: {e}", file=sys.stderr)
        return EXIT_INVALID

    try:
        config.validate()
        cfg = config_from_args(args)
        if cfg.dump:
            dump_hadamard(cfg)
        report = run_experiment(cfg)
        if cfg.output_path:
            report.write(cfg.output_path)
        else:
            sys.stdout.write(report.render())
        return EXIT_OK if report.passed else EXIT_FAILED
    except (ValidationError, CapacityError) as e:
        logger.error(f"Invalid request: {e}")
        return EXIT_INVALID
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return EXIT_FAILED
    except Exception as e:
        logger.error(f"Experiment failed: {e}", exc_info=True)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
