"""Tests for the command-line front end."""

import json
import math

import pytest

from landau_tails import cli, tails


def run(tmp_path, command, config, *extra):
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(config))
    out = tmp_path / "out"
    return cli.main([command, "--config", str(cfg_path),
                     "--out", str(out), *extra]), out


def read_csv(path):
    lines = [ln for ln in path.read_text().splitlines()
             if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


class TestPredict:
    def test_algebraic_tail(self, tmp_path):
        code, out = run(tmp_path, "predict", {
            "potential": {"family": "algebraic", "g0": 1.0, "alpha": 3.0},
            "rho": 1.0,
            "energy_grid": [1e-4, 1e-3, 1e-2],
        }, "--no-header")
        assert code == 0
        obj = json.loads((out / "tail.json").read_text())
        assert obj["status"] == "asymptote"
        assert obj["tail"]["amplitude"] == pytest.approx(88.3149227, rel=1e-6)
        assert obj["tail"]["energy_power"] == -2.0
        header, rows = read_csv(out / "tail.csv")
        assert header == ["E", "log_tail"]
        assert len(rows) == 3
        assert float(rows[0][1]) == pytest.approx(-88.3149227 * 1e8, rel=1e-6)

    def test_compact_disk_coefficient(self, tmp_path):
        code, out = run(tmp_path, "predict", {
            "potential": {"family": "compact_disk", "g": 1.0, "R": 1.0},
            "rho": 1.0,
        })
        assert code == 0
        obj = json.loads((out / "tail.json").read_text())
        assert obj["decay_class"] == "super_gaussian"
        assert obj["tail"]["amplitude"] == pytest.approx(2 * math.pi)

    def test_gaussian_bracket(self, tmp_path):
        code, out = run(tmp_path, "predict", {
            "potential": {"family": "gaussian", "g": 1.0, "lam": 1.0},
            "rho": 1.0,
            "sharp_gaussian": False,
        })
        assert code == 0
        obj = json.loads((out / "tail.json").read_text())
        assert obj["status"] == "bracket"
        assert obj["lower"]["amplitude"] == pytest.approx(3 * math.pi)
        assert obj["upper"]["amplitude"] == pytest.approx(2 * math.pi)

    def test_out_of_scope_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setattr(tails, "predict_tail", lambda *a, **k: None)
        monkeypatch.setattr(cli.tails, "predict_tail", lambda *a, **k: None)
        code, out = run(tmp_path, "predict", {
            "potential": {"family": "stretched_gaussian", "g": 1.0,
                          "lam": 1.0, "beta": 1.0},
        })
        assert code == cli.EXIT_OUT_OF_SCOPE
        obj = json.loads((out / "tail.json").read_text())
        assert obj["status"] == "out-of-scope"

    def test_byte_identical_reruns(self, tmp_path):
        config = {
            "potential": {"family": "algebraic", "g0": 1.0, "alpha": 3.0},
            "energy_grid": [1e-4, 1e-2],
        }
        _, out1 = run(tmp_path, "predict", config, "--no-header")
        first = (out1 / "tail.csv").read_bytes()
        _, out2 = run(tmp_path, "predict", config, "--no-header")
        assert (out2 / "tail.csv").read_bytes() == first

    def test_header_line_present_by_default(self, tmp_path):
        _, out = run(tmp_path, "predict", {
            "potential": {"family": "algebraic", "g0": 1.0, "alpha": 3.0},
            "energy_grid": [1e-4, 1e-2],
        })
        assert (out / "tail.csv").read_text().startswith("# generated ")


class TestBounds:
    def test_schema_and_ordering(self, tmp_path):
        code, out = run(tmp_path, "bounds", {
            "potential": {"family": "gaussian", "g": 1.0, "lam": 1.0},
            "rho": 1.0,
            "t_grid": [0.5, 5.0],
        }, "--no-header")
        assert code == 0
        header, rows = read_csv(out / "bounds.csv")
        assert header == ["t", "L_U", "L_conv", "lower", "upper"]
        for row in rows:
            t, L_U, L_conv, lower, upper = map(float, row)
            assert lower <= upper
            assert L_conv >= L_U

    def test_exploratory_lower_chain(self, tmp_path):
        code, out = run(tmp_path, "bounds", {
            "potential": {"family": "gaussian", "g": 1.0, "lam": 1.0},
            "t_grid": [1.0],
            "explore_lower_chain": True,
        }, "--no-header")
        assert code == 0
        header, _ = read_csv(out / "lower_chain.csv")
        assert header == ["t", "L_conv", "log_lower"]


class TestSimulate:
    def test_summary_and_csv(self, tmp_path):
        code, out = run(tmp_path, "simulate", {
            "potential": {"family": "gaussian", "g": 1.0, "lam": 1.0},
            "rho": 2.0,
            "seed": 12345,
            "n_samples": 20000,
            "truncation_delta": 1e-6,
            "energy_grid": {"start": 1.0, "stop": 20.0, "num": 6},
            "t_grid": [0.1, 1.0],
        }, "--no-header")
        assert code == 0
        header, rows = read_csv(out / "simulate.csv")
        assert header == ["E", "N_c", "stderr"]
        assert len(rows) == 6
        summary = json.loads((out / "summary.json").read_text())
        mean = summary["campbell_mean"]
        assert abs(mean["estimate"] - mean["target"]) <= 5 * mean["stderr"]
        assert all(not c["skipped"] for c in summary["crosscheck_ratios"])

    def test_seed_flag_overrides(self, tmp_path):
        config = {
            "potential": {"family": "gaussian", "g": 1.0, "lam": 1.0},
            "seed": 1, "n_samples": 1000,
            "energy_grid": [1.0, 2.0], "t_grid": [0.1],
        }
        _, out1 = run(tmp_path, "simulate", config, "--no-header")
        base = (out1 / "simulate.csv").read_bytes()
        _, out2 = run(tmp_path, "simulate", config, "--no-header", "--seed", "99")
        assert (out2 / "simulate.csv").read_bytes() != base
        _, out3 = run(tmp_path, "simulate", config, "--no-header", "--seed", "1")
        assert (out3 / "simulate.csv").read_bytes() == base


class TestTauber:
    def test_pass(self, tmp_path):
        code, out = run(tmp_path, "tauber", {
            "gamma": 0.5,
            "slow": {"kind": "const", "c": 0.25},
            "t_grid": [1e4, 1e6],
            "tolerance": 0.02,
        })
        assert code == 0
        report = json.loads((out / "tauber.json").read_text())
        assert report["pass"] is True

    def test_validation_failure_exit_code(self, tmp_path):
        # slow gamma=0 convergence: deviation ~0.3 at t=1e6 exceeds 0.1
        code, out = run(tmp_path, "tauber", {
            "gamma": 0.0,
            "slow": {"kind": "iterlog", "a0": 1.0, "exps": [-2.0]},
            "t_grid": [1e6],
            "tolerance": 0.1,
        })
        assert code == cli.EXIT_VALIDATION
        report = json.loads((out / "tauber.json").read_text())
        assert report["pass"] is False


class TestVerify:
    CONFIG = {
        "potential": {"family": "stretched_gaussian", "g": 1.0,
                      "lam": 1.0, "beta": 1.0},
        "abfall_t_grid": [1e10, 1e14, 1e18],
    }

    def test_suite_passes(self, tmp_path):
        code, out = run(tmp_path, "verify", self.CONFIG)
        assert code == 0
        report = json.loads((out / "verify.json").read_text())
        assert report["pass"] is True
        names = {c["check"] for c in report["checks"]}
        assert names >= {"decay_integral_limit", "convolution_decay",
                         "conjugate_pairs", "potter_bounds",
                         "staircase", "power_conventions"}

    def test_tolerance_scale_can_fail_suite(self, tmp_path):
        code, out = run(tmp_path, "verify", self.CONFIG,
                        "--tolerance-scale", "1e-9")
        assert code == cli.EXIT_VALIDATION
        report = json.loads((out / "verify.json").read_text())
        assert report["pass"] is False


class TestRegvar:
    def test_conjugate_report(self, tmp_path):
        code, out = run(tmp_path, "regvar", {
            "slow": {"kind": "iterlog", "a0": 1.0, "exps": [2.0]},
            "probes": [1e150],
            "gamma": 1.0,
        })
        assert code == 0
        report = json.loads((out / "regvar.json").read_text())
        assert report["conjugate"]["exps"] == [-2.0]
        assert report["residual"] <= 0.07


class TestConfigErrors:
    def test_missing_file(self, tmp_path):
        code = cli.main(["predict", "--config", str(tmp_path / "nope.json"),
                         "--out", str(tmp_path)])
        assert code == cli.EXIT_CONFIG

    def test_bad_family(self, tmp_path):
        code, _ = run(tmp_path, "predict",
                      {"potential": {"family": "nonsense"}})
        assert code == cli.EXIT_CONFIG

    def test_bad_grid(self, tmp_path):
        code, _ = run(tmp_path, "bounds", {
            "potential": {"family": "gaussian", "g": 1.0, "lam": 1.0},
            "t_grid": [2.0, 1.0],
        })
        assert code == cli.EXIT_CONFIG

    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = cli.main(["predict", "--config", str(bad),
                         "--out", str(tmp_path)])
        assert code == cli.EXIT_CONFIG

    def test_toml_accepted(self, tmp_path):
        cfg = tmp_path / "config.toml"
        cfg.write_text(
            'rho = 1.0\n\n'
            '[potential]\nfamily = "algebraic"\ng0 = 1.0\nalpha = 3.0\n'
        )
        out = tmp_path / "out"
        code = cli.main(["predict", "--config", str(cfg), "--out", str(out)])
        assert code == 0
        assert (out / "tail.json").exists()

    def test_env_var_default_out(self, tmp_path, monkeypatch):
        target = tmp_path / "envout"
        monkeypatch.setenv(cli.OUT_DIR_ENV, str(target))
        cfg = tmp_path / "config.json"
        cfg.write_text(json.dumps({
            "potential": {"family": "algebraic", "g0": 1.0, "alpha": 3.0},
            "energy_grid": [1e-4, 1e-2],
        }))
        code = cli.main(["predict", "--config", str(cfg)])
        assert code == 0
        assert (target / "tail.json").exists()
