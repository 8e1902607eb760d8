"""Utility modules for liberation-lab."""

from .logger import get_logger, log_stage, resolve_level, setup_logger
from .parallel import run_trials, worker_count
from .stats import (
    GrowthVerdict,
    Histogram,
    freedman_diaconis_bins,
    freedman_diaconis_histogram,
    growth_verdict,
    mean_and_se,
    within_tolerance,
)

__all__ = [
    "setup_logger",
    "get_logger",
    "log_stage",
    "resolve_level",
    "run_trials",
    "worker_count",
    "GrowthVerdict",
    "Histogram",
    "freedman_diaconis_bins",
    "freedman_diaconis_histogram",
    "growth_verdict",
    "mean_and_se",
    "within_tolerance",
]
