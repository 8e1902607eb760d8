"""
Configuration management for liberation-lab.
Tolerances, capacity caps and runtime settings live here; environment variables override defaults.
"""
import logging
import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Resolve project base directory (repo root)
BASE_DIR = Path(__file__).resolve().parents[2]


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, repr(default)))


class Config:
    """Configuration class with sensible defaults and env overrides."""

    # Paths
    BASE_DIR: Path = BASE_DIR
    LOGS_DIR: Path = Path(os.getenv("LIBLAB_LOGS_DIR", str(BASE_DIR / "logs")))
    OUTPUT_DIR: Path = Path(os.getenv("LIBLAB_OUTPUT_DIR", str(BASE_DIR / "output")))

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"
    LOG_DATE_FORMAT: str = "%Y-%m-%d %H:%M:%S"
    LOG_FILE: str = os.getenv("LIBLAB_LOG_FILE", "")
    MAX_LOG_SIZE: int = _env_int("MAX_LOG_SIZE", 10 * 1024 * 1024)
    LOG_BACKUP_COUNT: int = _env_int("LOG_BACKUP_COUNT", 5)

    # Worker pool
    THREADS: int = _env_int("LIBLAB_THREADS", os.cpu_count() or 1)

    # Tolerances
    HERMITIAN_TOL: float = _env_float("LIBLAB_HERMITIAN_TOL", 1e-12)
    UNITARY_TOL: float = _env_float("LIBLAB_UNITARY_TOL", 1e-10)
    TRACE_TOL: float = _env_float("LIBLAB_TRACE_TOL", 1e-12)
    EXACT_TOL: float = _env_float("LIBLAB_EXACT_TOL", 1e-12)
    PSD_TOL: float = _env_float("LIBLAB_PSD_TOL", 1e-9)
    QUAD_TOL: float = _env_float("LIBLAB_QUAD_TOL", 1e-10)
    RANK_TOL: float = _env_float("LIBLAB_RANK_TOL", 1e-8)
    ATOM_TOL: float = _env_float("LIBLAB_ATOM_TOL", 1e-8)

    # Statistical verdicts
    MOMENT_TOL: float = _env_float("LIBLAB_MOMENT_TOL", 0.05)
    ATOM_MASS_TOL: float = _env_float("LIBLAB_ATOM_MASS_TOL", 0.02)
    Z_SCORE: float = _env_float("LIBLAB_Z_SCORE", 4.0)
    GROWTH_SLOPE: float = _env_float("LIBLAB_GROWTH_SLOPE", 0.1)
    GROWTH_SIGMAS: float = _env_float("LIBLAB_GROWTH_SIGMAS", 3.0)
    CONCENTRATION_SPREAD: float = _env_float("LIBLAB_CONCENTRATION_SPREAD", 4.0)
    CONCENTRATION_CHECK_DRAWS: int = _env_int("LIBLAB_CONCENTRATION_CHECK_DRAWS", 1000)

    # Capacity caps
    MAX_SYLVESTER_K: int = 12
    MAX_DENSE_DFT: int = 4096
    MAX_ENUMERATION: int = 10**7
    MAX_GROUP_N: int = 4
    MAX_PARTITION_ELL: int = 10
    MAX_MOBIUS_ELL: int = 8
    MAX_WORD_LENGTH: int = 16
    MAX_ADDITIVE_K: int = 12
    MAX_MULTIPLICATIVE_K: int = 10
    MAX_QUADRATURE_K: int = 10
    MAX_FIBONACCI_K: int = 40
    MAX_WEIGHT_LENGTH: int = 16
    MIN_ENTRY_MOMENT_TRIALS: int = 100

    # Experiment defaults
    DEFAULT_SEED: int = _env_int("LIBLAB_SEED", 20140101)
    DEFAULT_TRIALS: int = _env_int("LIBLAB_TRIALS", 50)

    @classmethod
    def ensure_directories(cls):
        cls.LOGS_DIR.mkdir(parents=True, exist_ok=True)
        cls.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

    @classmethod
    def validate(cls):
        if cls.THREADS < 1:
            raise ValueError(f"LIBLAB_THREADS must be positive, got {cls.THREADS}")
        if not isinstance(logging.getLevelName(cls.LOG_LEVEL.upper()), int):
            raise ValueError(f"Invalid log level: {cls.LOG_LEVEL}")
        for name in (
            "HERMITIAN_TOL",
            "UNITARY_TOL",
            "TRACE_TOL",
            "EXACT_TOL",
            "PSD_TOL",
            "QUAD_TOL",
            "RANK_TOL",
            "ATOM_TOL",
        ):
            value = getattr(cls, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if cls.Z_SCORE <= 0 or cls.MOMENT_TOL < 0:
            raise ValueError("Z_SCORE must be positive and MOMENT_TOL nonnegative.")
        return True


# Exported config handle
config = Config()
