"""Tests for configuration, logging, the trial pool and the statistics helpers."""
import logging

import numpy as np
import pytest

from liblab.config import Config, config
from liblab.utils.logger import get_logger, log_stage, resolve_level, setup_logger
from liblab.utils.parallel import worker_count
from liblab.utils.stats import (
    freedman_diaconis_bins,
    freedman_diaconis_histogram,
    growth_verdict,
    mean_and_se,
    within_tolerance,
)


class TestConfig:
    def test_defaults_validate(self):
        assert config.validate() is True
        assert config.MAX_GROUP_N == 4
        assert config.MIN_ENTRY_MOMENT_TRIALS == 100

    def test_rejects_bad_tolerance(self, monkeypatch):
        monkeypatch.setattr(Config, "EXACT_TOL", 0.0)
        with pytest.raises(ValueError):
            Config.validate()

    def test_rejects_bad_threads(self, monkeypatch):
        monkeypatch.setattr(Config, "THREADS", 0)
        with pytest.raises(ValueError):
            Config.validate()


class TestLogger:
    def test_level_and_handlers(self):
        logger = setup_logger("liblab.test.console", level="debug")
        assert logger.level == logging.DEBUG
        assert len(logger.handlers) == 1
        setup_logger("liblab.test.console", level="WARNING")
        assert len(logger.handlers) == 1

    def test_invalid_levels(self):
        with pytest.raises(ValueError):
            setup_logger("liblab.test.bad", level="LOUD")
        with pytest.raises(ValueError):
            setup_logger("liblab.test.bad", level="  ")

    def test_file_handler(self, monkeypatch, tmp_path):
        monkeypatch.setattr(Config, "LOGS_DIR", tmp_path / "logs")
        monkeypatch.setattr(Config, "OUTPUT_DIR", tmp_path / "output")
        logger = setup_logger("liblab.test.file", "run.log", level="INFO")
        logger.info("hello")
        for handler in logger.handlers:
            handler.flush()
        assert "hello" in (tmp_path / "logs" / "run.log").read_text()
        logger.handlers.clear()

    def test_get_logger(self):
        assert get_logger("liblab.x") is logging.getLogger("liblab.x")
        assert get_logger("liblab") is logging.getLogger("liblab")
        assert get_logger("outside").name == "liblab.outside"

    def test_resolve_level(self):
        assert resolve_level("warning") == logging.WARNING
        assert resolve_level(logging.ERROR) == logging.ERROR
        assert resolve_level() == logging.getLevelName(config.LOG_LEVEL.upper())

    def test_does_not_propagate(self):
        assert setup_logger("liblab.test.quiet", level="INFO").propagate is False

    def test_log_stage(self, caplog):
        logger = logging.getLogger("liblab.test.stage")
        logger.setLevel(logging.DEBUG)
        logger.addHandler(caplog.handler)
        try:
            with log_stage(logger, "demo"):
                pass
        finally:
            logger.removeHandler(caplog.handler)
        assert "demo finished in" in caplog.text


class TestWorkers:
    def test_worker_count(self, monkeypatch):
        assert worker_count(3) == 3
        assert worker_count(0) == 1
        monkeypatch.setattr(Config, "THREADS", 5)
        assert worker_count() == 5


class TestStats:
    def test_mean_and_se(self):
        mean, se = mean_and_se(np.array([1.0, 2.0, 3.0, 4.0]))
        assert mean == pytest.approx(2.5)
        assert se == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2.0)
        mean, se = mean_and_se(np.array([[1.0, 2.0]]))
        np.testing.assert_array_equal(se, [0.0, 0.0])

    def test_complex_se(self):
        _, se = mean_and_se(np.array([1j, -1j]))
        assert se == pytest.approx(1.0)

    def test_within_tolerance(self):
        assert within_tolerance(1.04, 1.0, 0.0, abs_tol=0.05)
        assert not within_tolerance(1.2, 1.0, 0.01, abs_tol=0.05)
        assert within_tolerance(1.2, 1.0, 0.06, abs_tol=0.05, z=4.0)

    def test_growth_verdict_flat(self):
        ns = [64, 128, 256, 512]
        verdict = growth_verdict(ns, [1.0, 1.01, 0.99, 1.0], [0.02] * 4)
        assert verdict.passed
        assert abs(verdict.slope) < 0.05

    def test_growth_verdict_detects_sqrt_growth(self):
        ns = np.array([64, 128, 256, 512])
        verdict = growth_verdict(ns, np.sqrt(ns), 0.01 * np.sqrt(ns))
        assert verdict.slope == pytest.approx(0.5, abs=1e-6)
        assert not verdict.passed

    def test_growth_verdict_floors_at_se(self):
        verdict = growth_verdict([16, 64], [0.0, 0.0], [0.1, 0.1])
        assert verdict.passed
        assert verdict.to_dict()["slope"] == pytest.approx(0.0)

    def test_histogram(self, generator):
        histogram = freedman_diaconis_histogram(generator.standard_normal(500))
        assert sum(histogram.masses) == pytest.approx(1.0)
        assert len(histogram.edges) == len(histogram.masses) + 1
        assert freedman_diaconis_histogram([]).to_dict() == {"edges": [], "masses": []}

    def test_histogram_bins_capped_for_point_mass_with_outliers(self, generator):
        # spectrum of a near-projection: a tight cluster plus the two atoms
        data = np.concatenate([0.5 + 1e-12 * generator.standard_normal(1000), [0.0, 1.0]])
        assert freedman_diaconis_bins(data) == int(np.ceil(2 * np.sqrt(data.size)))
        histogram = freedman_diaconis_histogram(data)
        assert len(histogram.masses) <= 64
        assert sum(histogram.masses) == pytest.approx(1.0)

    def test_histogram_constant_data(self):
        assert freedman_diaconis_bins(np.full(10, 3.0)) == 1
        assert freedman_diaconis_histogram(np.full(10, 3.0)).masses == [1.0]
