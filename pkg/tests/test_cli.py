import json
import subprocess
import sys

from symbreak.cli import cli_main


def read_json(path):
    return json.loads(path.read_text())


class TestExitCodes:
    def test_no_command_prints_usage(self, capsys):
        assert cli_main([]) == 1

    def test_unknown_subcommand(self):
        assert cli_main(["bogus"]) == 1

    def test_unknown_flag(self):
        assert cli_main(["experiment", "epr", "--seed", "1", "--frobnicate"]) == 1

    def test_unknown_experiment_name(self, tmp_path):
        assert cli_main(["experiment", "nope", "--seed", "1", "--out", str(tmp_path)]) == 1

    def test_missing_seed(self, tmp_path):
        assert cli_main(["experiment", "epr", "--out", str(tmp_path)]) == 1

    def test_missing_config_file(self, tmp_path):
        assert cli_main(["gibbs", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 1

    def test_malformed_config_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert cli_main(["gibbs", "--config", str(bad), "--out", str(tmp_path)]) == 1

    def test_invalid_gibbs_values(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "lattice": 1, "coupling": 1.0, "field": 0.0, "temperature": 1.0,
            "sweeps": 10, "burn_in": 0, "seed": 1,
        }))
        assert cli_main(["gibbs", "--config", str(bad), "--out", str(tmp_path)]) == 1

    def test_invalid_experiment_parameter(self, tmp_path):
        cfg = tmp_path / "exp.json"
        cfg.write_text(json.dumps({"seed": 1, "parameters": {"first_axis_keep": "up"}}))
        code = cli_main([
            "experiment", "stern-gerlach", "--config", str(cfg), "--out", str(tmp_path),
        ])
        assert code == 1

    def test_runtime_failure_exits_two(self, tmp_path):
        blocker = tmp_path / "not-a-dir"
        blocker.write_text("")
        code = cli_main([
            "experiment", "zeno", "--seed", "1", "--trials", "10000",
            "--out", str(blocker),
        ])
        assert code == 2


class TestExperimentCommand:
    def test_writes_summary_and_meta(self, tmp_path):
        code = cli_main([
            "experiment", "stern-gerlach", "--seed", "5", "--trials", "20000",
            "--out", str(tmp_path),
        ])
        assert code == 0
        run_dir = tmp_path / "stern-gerlach-5"
        payload = read_json(run_dir / "summary.json")
        assert payload["experiment"] == "stern-gerlach"
        assert abs(payload["summary"]["frequency_plus"] - 0.5) < 0.02
        assert (run_dir / "run_meta.json").exists()
        assert not (run_dir / "trials.csv").exists()

    def test_rerun_is_byte_identical(self, tmp_path):
        args = ["experiment", "stern-gerlach", "--seed", "42", "--trials", "50000"]
        assert cli_main(args + ["--out", str(tmp_path / "a")]) == 0
        assert cli_main(args + ["--out", str(tmp_path / "b")]) == 0
        first = (tmp_path / "a" / "stern-gerlach-42" / "summary.json").read_bytes()
        second = (tmp_path / "b" / "stern-gerlach-42" / "summary.json").read_bytes()
        assert first == second

    def test_per_trial_csv(self, tmp_path):
        code = cli_main([
            "experiment", "stern-gerlach", "--seed", "7", "--trials", "1000",
            "--out", str(tmp_path), "--per-trial",
        ])
        assert code == 0
        csv_path = tmp_path / "stern-gerlach-7" / "trials.csv"
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "trial,outcome"
        assert len(lines) == 1001

    def test_config_file_parameters(self, tmp_path):
        cfg = tmp_path / "exp.json"
        cfg.write_text(json.dumps({
            "seed": 9,
            "trials": 20000,
            "parameters": {"n_checks": 1, "total_rotation": 0.0},
        }))
        code = cli_main(["experiment", "zeno", "--config", str(cfg), "--out", str(tmp_path)])
        assert code == 0
        payload = read_json(tmp_path / "zeno-9" / "summary.json")
        assert payload["summary"]["survival"] == 1.0


class TestBornScanCommand:
    def test_passing_is_identity_exponent(self, tmp_path):
        code = cli_main(["born-scan", "--states", "50", "--seed", "1", "--out", str(tmp_path)])
        assert code == 0
        run_dir = tmp_path / "born-scan-1"
        payload = read_json(run_dir / "summary.json")
        assert payload["summary"]["passing"] == [1.0]
        lines = (run_dir / "betas.csv").read_text().strip().splitlines()
        assert lines[0] == "beta,max_normalization_violation,multiplicativity_violation"
        assert len(lines) == 8

    def test_requires_seed(self, tmp_path):
        assert cli_main(["born-scan", "--states", "10", "--out", str(tmp_path)]) == 1


class TestGibbsCommand:
    def test_trajectory_and_summary(self, tmp_path):
        cfg = tmp_path / "gibbs.json"
        cfg.write_text(json.dumps({
            "lattice": 8, "coupling": 1.0, "field": 0.0, "temperature": 1.0,
            "sweeps": 400, "burn_in": 100, "seed": 11,
        }))
        code = cli_main(["gibbs", "--config", str(cfg), "--out", str(tmp_path)])
        assert code == 0
        run_dir = tmp_path / "gibbs-11"
        payload = read_json(run_dir / "summary.json")
        assert payload["summary"]["broken"] is True
        assert payload["summary"]["recorded_sweeps"] == 300
        lines = (run_dir / "trajectory.csv").read_text().strip().splitlines()
        assert lines[0] == "sweep,m,E"
        assert len(lines) == 301
        assert lines[1].startswith("100,")

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = tmp_path / "gibbs.json"
        cfg.write_text(json.dumps({
            "lattice": 8, "coupling": 1.0, "field": 0.0, "temperature": 2.0,
            "sweeps": 300, "burn_in": 100, "seed": 13,
        }))
        assert cli_main(["gibbs", "--config", str(cfg), "--out", str(tmp_path / "a")]) == 0
        assert cli_main(["gibbs", "--config", str(cfg), "--out", str(tmp_path / "b")]) == 0
        first = (tmp_path / "a" / "gibbs-13" / "summary.json").read_bytes()
        assert first == (tmp_path / "b" / "gibbs-13" / "summary.json").read_bytes()
        first_csv = (tmp_path / "a" / "gibbs-13" / "trajectory.csv").read_bytes()
        assert first_csv == (tmp_path / "b" / "gibbs-13" / "trajectory.csv").read_bytes()


class TestSweepCommand:
    def test_points_and_crossing(self, tmp_path):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({
            "base": {
                "lattice": 8, "coupling": 1.0, "field": 0.0, "temperature": 1.0,
                "sweeps": 500, "burn_in": 200, "seed": 17,
            },
            "temperatures": [1.0, 5.0],
            "seeds_per_temperature": 8,
        }))
        code = cli_main(["sweep", "--config", str(cfg), "--out", str(tmp_path)])
        assert code == 0
        payload = read_json(tmp_path / "sweep-17" / "summary.json")
        points = payload["summary"]["points"]
        assert points[0]["broken_fraction"] > points[1]["broken_fraction"]
        lines = (tmp_path / "sweep-17" / "sweep.csv").read_text().strip().splitlines()
        assert lines[0] == "temperature,mean_abs_magnetization,broken_fraction"
        assert len(lines) == 3

    def test_missing_keys_rejected(self, tmp_path):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({"temperatures": [1.0]}))
        assert cli_main(["sweep", "--config", str(cfg), "--out", str(tmp_path)]) == 1


class TestConsoleEntryPoint:
    def test_module_invocation(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "symbreak.cli", "born-scan", "--states", "5",
             "--seed", "2", "--out", str(tmp_path)],
            capture_output=True,
            text=True,
            timeout=120,
        )
        assert result.returncode == 0
        assert (tmp_path / "born-scan-2" / "summary.json").exists()
