"""Tests for the experiment layer: settings, reports, runners and the command-line entry point."""
import json

import numpy as np
import pytest

import liblab.cli as cli
from liblab.cli import build_parser, main
from liblab.cli.experiments import (
    run_compression_experiment,
    run_concentration_experiment,
    run_experiment,
    run_hadamard_iid_experiment,
    run_liberation,
    run_product_experiment,
    run_sum_experiment,
)
from liblab.cli.report import ExperimentReport
from liblab.cli.suite import run_verification_suite
from liblab.config import Config
from liblab.errors import ShapeError, ValidationError
from liblab.utils.stats import Histogram


def _assert_moments_within(report, floor):
    """Every moment within max(floor, 4 SE) of its free limit."""
    gaps = np.abs(np.subtract(report.moments, report.targets))
    limits = np.maximum(floor, 4.0 * np.asarray(report.se))
    assert np.all(gaps <= limits), list(zip(gaps, limits))


class TestExperimentConfig:
    def test_defaults(self, make_config):
        cfg = make_config("sum")
        assert cfg.ns == (16,)
        assert cfg.hadamard_for(16) == "sylvester"
        assert cfg.hadamard_for(12) == "dft"
        law_a, law_b = cfg.laws()
        assert str(law_a) == "rademacher" and str(law_b) == "rademacher"

    @pytest.mark.parametrize(
        "overrides",
        [
            {"n": 1},
            {"trials": 0},
            {"seed": -5},
            {"alpha": 1.0},
            {"hadamard": "paley"},
            {"hadamard": "sylvester", "n": 12},
            {"output_format": "xml"},
            {"unitary": "gaussian"},
            {"workers": 0},
            {"law_a": "cauchy"},
            {"family_size": -1},
        ],
    )
    def test_rejects_bad_settings(self, make_config, overrides):
        with pytest.raises(ValidationError):
            make_config("sum", **overrides)

    def test_unknown_experiment(self, make_config):
        with pytest.raises(ValidationError):
            make_config("spectral-gap")

    def test_echo_leaves_out_runtime_settings(self, make_config):
        data = make_config("compress", workers=3, output_path="out.json", alpha=0.3).to_dict()
        assert "workers" not in data and "output_path" not in data
        assert data["alpha"] == 0.3 and data["beta"] == 0.5

    def test_sweep_overrides_n(self, make_config):
        cfg = make_config("liberate", sweep=(8, 12))
        assert cfg.ns == (8, 12)
        assert cfg.to_dict()["hadamard"] == ["sylvester", "dft"]


class TestExperimentReport:
    def test_checks(self, make_config):
        report = ExperimentReport(make_config("sum"))
        assert report.passed
        report.add_check("good", True, value=np.float64(1.5))
        report.add_check("bad", False, value=np.array([1, 2]))
        assert not report.passed
        assert report.failed_checks == ["bad"]
        assert report.checks[1]["detail"] == {"value": [1, 2]}

    def test_json_is_plain(self, make_config):
        report = ExperimentReport(make_config("sum"), moments=[0.5], se=[0.1], targets=[0.5])
        report.data = {"mean": 1 + 2j, "missing": float("nan")}
        payload = json.loads(report.to_json())
        assert payload["data"] == {"mean": [1.0, 2.0], "missing": None}
        assert payload["wall_time_ms"] is None
        assert payload["passed"] is True

    def test_csv_layout(self, make_config):
        report = ExperimentReport(
            make_config("sum", output_format="csv"),
            moments=[0.0, 2.0],
            se=[0.01, 0.02],
            targets=[0.0, 2.0],
            histogram=Histogram([0.0, 0.5, 1.0], [0.25, 0.75]),
        )
        report.add_check("moment_1", True)
        lines = report.render().splitlines()
        assert lines[0] == "section,index,value,se,target"
        assert lines[1] == "moment,1,0.0,0.01,0.0"
        assert lines[3] == "histogram,0,0.25,0.0,0.5"
        assert lines[-1] == "check,moment_1,1,,"

    def test_write(self, make_config, tmp_path):
        report = ExperimentReport(make_config("sum"))
        target = report.write(tmp_path / "nested" / "report.json")
        assert json.loads(target.read_text())["config"]["experiment"] == "sum"


class TestSpectralExperiments:
    def test_sum_report_shape(self, make_config):
        report = run_sum_experiment(make_config("sum"))
        assert [c["name"] for c in report.checks] == [f"moment_{k}" for k in range(1, 7)]
        np.testing.assert_allclose(report.targets, [0, 2, 0, 6, 0, 20], atol=1e-12)
        # both traces vanish, so the first moment is exact
        assert report.moments[0] == pytest.approx(0.0, abs=1e-12)
        assert report.checks[0]["passed"]
        assert sum(report.histogram.masses) == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "experiment, overrides",
        [
            ("sum", {}),
            ("compress", {"alpha": 0.3, "beta": 0.9}),
            ("liberate", {"sweep": (8, 16), "trials": 12}),
            ("concentrate", {"sweep": (8, 16)}),
        ],
    )
    def test_json_is_byte_identical_across_thread_counts(self, monkeypatch, make_config, experiment, overrides):
        rendered = []
        for threads in (1, 4):
            monkeypatch.setattr(Config, "THREADS", threads)
            cfg = make_config(experiment, workers=None, **overrides)
            rendered.append(run_experiment(cfg).to_json())
        assert rendered[0] == rendered[1]

    def test_sum_with_explicit_matrices(self, make_config):
        a = np.diag([1.0, -1.0, 2.0, -2.0])
        report = run_sum_experiment(make_config("sum", n=4, moment_order=2), matrices=(a, a))
        assert report.targets[0] == pytest.approx(0.0)
        assert report.targets[1] == pytest.approx(5.0)
        with pytest.raises(ShapeError):
            run_sum_experiment(make_config("sum", n=8), matrices=(a, a))

    def test_product_needs_nonnegative_a(self, make_config):
        with pytest.raises(ValidationError):
            run_product_experiment(make_config("product", law_a="rademacher"))

    def test_product_first_moment(self, make_config):
        report = run_product_experiment(make_config("product", moment_order=3))
        assert report.targets[0] == pytest.approx(0.25)
        assert report.moments[0] == pytest.approx(0.25, abs=1e-10)

    def test_hadamard_iid_point_masses_are_exact(self, make_config):
        report = run_hadamard_iid_experiment(make_config("hadamard-iid", n=12, law_a="one", law_b="one"))
        assert report.passed
        np.testing.assert_allclose(report.moments, [2.0**k for k in range(1, 7)], rtol=1e-10)

    def test_hadamard_iid_equal_coupling_rejects_two_laws(self, make_config):
        cfg = make_config("hadamard-iid", coupling="equal", law_a="bernoulli:0.5", law_b="rademacher")
        with pytest.raises(ValidationError):
            run_hadamard_iid_experiment(cfg)

    def test_hadamard_iid_product_needs_nonnegative_x(self, make_config):
        with pytest.raises(ValidationError):
            run_hadamard_iid_experiment(make_config("hadamard-iid", operation="product", law_a="rademacher"))

    def test_compression_report(self, make_config):
        report = run_compression_experiment(make_config("compress", alpha=0.3, beta=0.9))
        names = [c["name"] for c in report.checks]
        assert names[:3] == ["atom0", "atom1", "support"]
        assert report.checks[2]["passed"]
        assert report.data["law"]["atom1"] == pytest.approx(0.2)
        assert len(report.data["bin_centres"]) == len(report.data["reference_density"])

    @pytest.mark.slow
    def test_fake_haar_sum_at_desk_scale(self, make_config):
        report = run_sum_experiment(make_config("sum", n=512, trials=50, hadamard="sylvester", workers=None))
        assert report.passed, report.failed_checks
        _assert_moments_within(report, 0.05)
        np.testing.assert_allclose(report.targets, [0, 2, 0, 6, 0, 20], atol=1e-10)

    @pytest.mark.slow
    def test_hadamard_iid_bernoulli_at_desk_scale(self, make_config):
        cfg = make_config(
            "hadamard-iid",
            n=512,
            trials=50,
            hadamard="dft",
            law_a="bernoulli:0.5",
            law_b="bernoulli:0.5",
            workers=None,
        )
        report = run_hadamard_iid_experiment(cfg)
        assert report.passed, report.failed_checks
        _assert_moments_within(report, 0.05)

    @pytest.mark.slow
    def test_half_projections_compress_at_desk_scale(self, make_config):
        report = run_compression_experiment(make_config("compress", n=512, trials=50, alpha=0.5, beta=0.5, workers=None))
        assert report.passed, report.failed_checks
        checks = {c["name"]: c["detail"] for c in report.checks}
        assert checks["atom0"]["estimate"] == pytest.approx(0.5, abs=0.02)
        assert checks["atom1"]["estimate"] == pytest.approx(0.0, abs=0.02)
        assert report.moments[0] == pytest.approx(0.25, abs=0.02)
        assert report.moments[1] == pytest.approx(0.1875, abs=0.02)

    @pytest.mark.slow
    def test_compression_atom_at_one_at_desk_scale(self, make_config):
        report = run_compression_experiment(make_config("compress", n=512, trials=50, alpha=0.3, beta=0.9, workers=None))
        assert report.passed, report.failed_checks
        atom1 = next(c for c in report.checks if c["name"] == "atom1")["detail"]
        assert atom1["estimate"] == pytest.approx(0.2, abs=0.02)


class TestConcentration:
    def test_perturbation_checks(self, make_config):
        report = run_concentration_experiment(make_config("concentrate", sweep=(8, 16)))
        checks = {c["name"]: c for c in report.checks}
        for n in (8, 16):
            assert checks[f"rank_n{n}"]["passed"]
            assert checks[f"edf_gap_n{n}"]["passed"]
        assert "variance_scaling" in checks
        assert [row["n"] for row in report.data["sweep"]] == [8, 16]

    def test_needs_two_trials(self, make_config):
        with pytest.raises(ValidationError):
            run_concentration_experiment(make_config("concentrate", trials=1))

    @pytest.mark.slow
    def test_concentration_at_desk_scale(self, make_config):
        ns = (64, 128, 256, 512)
        report = run_concentration_experiment(make_config("concentrate", sweep=ns, trials=2000, workers=None))
        checks = {c["name"]: c for c in report.checks}
        for n in ns:
            assert checks[f"rank_n{n}"]["passed"]
            assert checks[f"rank_n{n}"]["detail"]["draws"] == 1000
            assert checks[f"edf_gap_n{n}"]["passed"]
        assert checks["variance_scaling"]["passed"], checks["variance_scaling"]


class TestLiberation:
    def test_pattern_checks(self, make_config):
        with pytest.raises(ValidationError):
            run_liberation(make_config("liberate", pattern=(1, 1)))
        with pytest.raises(ValidationError):
            run_liberation(make_config("liberate", pattern=(1, 2, 1)))
        with pytest.raises(ValidationError):
            run_liberation(make_config("liberate", pattern=(1, 3)))

    def test_identity_matrices_rejected(self, make_config):
        with pytest.raises(ValidationError):
            run_liberation(make_config("liberate", n=4), matrices=[np.eye(4), np.eye(4)])

    def test_matrix_count_must_match_pattern(self, make_config, trace_zero_pair):
        with pytest.raises(ShapeError):
            run_liberation(make_config("liberate", pattern=(1, 2, 1, 2)), matrices=trace_zero_pair)

    def test_sweep_report(self, make_config):
        report = run_liberation(make_config("liberate", sweep=(8, 16), trials=20))
        checks = {c["name"]: c for c in report.checks}
        assert set(checks) == {"bounded_growth", "entry_moment"}
        # entries of W* H W / sqrt(N) all have modulus 1/sqrt(N)
        assert checks["entry_moment"]["detail"]["value"] == pytest.approx(1.0)
        assert checks["entry_moment"]["passed"]
        assert [row["n"] for row in report.data["sweep"]] == [8, 16]

    def test_fixed_matrices(self, make_config, trace_zero_pair):
        cfg = make_config("liberate", n=3, family_size=1, pattern=(2, 3), trials=10)
        report = run_liberation(cfg, matrices=trace_zero_pair)
        assert report.data["sweep"][0]["n"] == 3
        assert report.checks[1]["detail"]["pair"] == ["HW", "D1HW"]

    @pytest.mark.slow
    def test_decay_sweep_at_desk_scale(self, make_config):
        ns = (64, 128, 256, 512)
        report = run_liberation(make_config("liberate", sweep=ns, trials=200, workers=None))
        checks = {c["name"]: c for c in report.checks}
        assert checks["bounded_growth"]["passed"], checks["bounded_growth"]
        assert checks["entry_moment"]["passed"]
        assert [row["n"] for row in report.data["sweep"]] == list(ns)


class TestVerificationSuite:
    @pytest.mark.slow
    def test_suite_passes(self, make_config):
        report = run_verification_suite(make_config("verify"))
        assert report.passed, report.failed_checks
        checks = {c["name"]: c for c in report.checks}
        # 100 instances at each of n = 2, 3 for two patterns apiece
        assert checks["twist_identity"]["detail"]["instances_checked"] == 400
        assert checks["less_jarring_recursion"]["detail"]["instances_checked"] == 400
        assert checks["free_calculus_consistency"]["detail"]["max_gap"] <= 1e-5
        assert checks["free_additive_arcsine"]["passed"]

    @pytest.mark.slow
    def test_wrong_mobius_table_fails(self, make_config):
        report = run_verification_suite(make_config("verify"), mobius=lambda p: 0)
        assert "mobius_inversion" in report.failed_checks


class TestRunExperiment:
    def test_timing(self, make_config):
        assert run_experiment(make_config("compress", timing=True)).wall_time_ms is not None
        assert run_experiment(make_config("compress")).wall_time_ms is None


class TestMain:
    def test_parser_sweep(self):
        args = build_parser().parse_args(["liberate", "--sweep", "64,128", "--pattern", "1,2,1,3"])
        assert args.sweep == [64, 128]
        assert args.pattern == [1, 2, 1, 3]
        with pytest.raises(SystemExit):
            build_parser().parse_args(["liberate", "--sweep", "a,b"])

    def test_success_writes_report(self, tmp_path):
        out = tmp_path / "iid.json"
        code = main(
            ["hadamard-iid", "--n", "8", "--trials", "2", "--law-a", "one", "--law-b", "one", "--out", str(out)]
        )
        assert code == cli.EXIT_OK
        assert json.loads(out.read_text())["passed"] is True

    def test_stdout_csv(self, capsys):
        code = main(["hadamard-iid", "--n", "8", "--trials", "2", "--law-a", "one", "--law-b", "one", "--format", "csv"])
        assert code == cli.EXIT_OK
        assert capsys.readouterr().out.startswith("section,index,value,se,target")

    def test_dump(self, tmp_path):
        target = tmp_path / "h.json"
        main(["hadamard-iid", "--n", "8", "--trials", "2", "--law-a", "one", "--law-b", "one", "--dump", str(target)])
        assert json.loads(target.read_text())["n"] == 8

    def test_invalid_input(self):
        assert main(["sum", "--n", "1"]) == cli.EXIT_INVALID
        assert main(["product", "--n", "8", "--trials", "2", "--law-a", "rademacher"]) == cli.EXIT_INVALID
        assert main(["sum", "--log-level", "LOUD"]) == cli.EXIT_INVALID

    def test_failed_checks(self, monkeypatch):
        def failing(cfg):
            report = ExperimentReport(cfg)
            report.add_check("forced", False)
            return report

        monkeypatch.setattr(cli, "run_experiment", failing)
        assert main(["sum", "--n", "8"]) == cli.EXIT_FAILED

    def test_unexpected_error(self, monkeypatch):
        def broken(cfg):
            raise RuntimeError("boom")

        monkeypatch.setattr(cli, "run_experiment", broken)
        assert main(["sum", "--n", "8"]) == cli.EXIT_FAILED
