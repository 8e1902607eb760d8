"""Logging for the liblab package namespace."""
import logging
import sys
import time
from contextlib import contextmanager
from logging.handlers import RotatingFileHandler
from typing import Iterator, Optional, Union

from ..config import config

PACKAGE_LOGGER = "liblab"


def resolve_level(level: Optional[Union[str, int]] = None) -> int:
    """
    Turn a level name (any case) or number into a logging level.

    Falls back to ``config.LOG_LEVEL`` when ``level`` is None.

    Raises:
        ValueError: For blank or unknown names
    """
    if isinstance(level, int):
        return level
    if isinstance(level, str) and level.strip() == "":
        raise ValueError("Log level cannot be an empty string.")
    name = (level or config.LOG_LEVEL).strip().upper()
    value = logging.getLevelName(name)
    if not isinstance(value, int):
        raise ValueError(f"Invalid log level: {level or config.LOG_LEVEL}")
    return value


def setup_logger(
    name: str = PACKAGE_LOGGER,
    log_file: Optional[str] = None,
    level: Optional[Union[str, int]] = None,
) -> logging.Logger:
    """
    Configure a logger in the package namespace.

    Console output goes to stderr so reports written to stdout stay clean.
    Records do not propagate past the configured logger, which keeps test
    runs and embedding applications from printing them twice.

    Args:
        name: Logger name, usually ``liblab``
        log_file: Optional file name placed under ``config.LOGS_DIR``
        level: Level name or number; defaults to ``config.LOG_LEVEL``

    Returns:
        The configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(resolve_level(level))
    logger.handlers.clear()
    logger.propagate = False

    formatter = logging.Formatter(config.LOG_FORMAT, datefmt=config.LOG_DATE_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        config.ensure_directories()
        file_handler = RotatingFileHandler(
            config.LOGS_DIR / log_file,
            maxBytes=config.MAX_LOG_SIZE,
            backupCount=config.LOG_BACKUP_COUNT,
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def get_logger(name: str) -> logging.Logger:
    """Module logger under ``liblab``; bare names are nested into the namespace."""
    if name != PACKAGE_LOGGER and not name.startswith(PACKAGE_LOGGER + "."):
        name = f"{PACKAGE_LOGGER}.{name}"
    return logging.getLogger(name)


@contextmanager
def log_stage(logger: logging.Logger, stage: str, level: int = logging.DEBUG) -> Iterator[None]:
    """Log the wall time of a block at ``level`` once it finishes."""
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.log(level, f"{stage} finished in {time.perf_counter() - start:.3f}s")
