import json

import pytest

from qshannon import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


class TestUsage:
    def test_no_command_is_usage_error(self, capsys):
        assert cli.main([]) == 2

    def test_unknown_params(self, capsys):
        assert cli.main(["entropy"]) == 2  # no probs/state given

    def test_bad_config_path(self, capsys):
        assert cli.main(["entropy", "--config", "/nonexistent.json"]) == 2


class TestEntropyCommand:
    def test_probs_json(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "entropy", "probs": [0.5, 0.5]}))
        code, out = run(["--config", str(cfg)], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["results"]["shannon_entropy"] == pytest.approx(1.0)

    def test_state_matrix_input(self, tmp_path, capsys):
        state = [[[0.75, 0.0], [0.25, 0.0]], [[0.25, 0.0], [0.25, 0.0]]]
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "entropy", "state": state}))
        code, out = run(["--config", str(cfg)], capsys)
        assert code == 0
        assert json.loads(out)["results"]["von_neumann_entropy"] == pytest.approx(
            0.60088, abs=1e-4)

    def test_csv_format(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "entropy", "probs": [0.25, 0.75]}))
        code, out = run(["--config", str(cfg), "--format", "csv"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "name,value"
        assert lines[1].startswith("shannon_entropy,0.811278124459")


class TestSchema:
    def test_reports_validate(self, tmp_path, capsys):
        import jsonschema

        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "compress",
                                   "example": "schumacher3qubit"}))
        code, out = run(["--config", str(cfg)], capsys)
        assert code == 0
        jsonschema.validate(json.loads(out), cli.load_schema())


class TestDeterminism:
    def test_byte_identical_modulo_wall_time(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "capacity", "family": "erasure",
                                   "grid": [0.0, 0.25], "which": ["Q1"],
                                   "seed": 5}))
        outputs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert cli.main(["--config", str(cfg), "--out", str(out)]) == 0
            report = json.loads(out.read_text())
            del report["wall_time"]
            outputs.append(json.dumps(report, sort_keys=True))
        assert outputs[0] == outputs[1]

    def test_csv_deterministic(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "blackhole", "n": 6, "k": 2,
                                   "c": 2, "trials": 10, "seed": 3,
                                   "format": "csv"}))
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert cli.main(["--config", str(cfg), "--out", str(a)]) == 0
        assert cli.main(["--config", str(cfg), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestCapacityCommand:
    def test_erasure_q1_rows(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "capacity", "family": "erasure",
                                   "grid": [0.0, 0.1, 0.25, 0.4],
                                   "which": ["Q1"], "format": "csv"}))
        code, out = run(["--config", str(cfg)], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "family,p,quantity,value,err,converged"
        values = [float(line.split(",")[3]) for line in lines[1:]]
        assert values == pytest.approx([1.0, 0.8, 0.5, 0.2], abs=1e-4)


class TestDecoupleCommand:
    def test_pure_source_example(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "decouple",
                                   "dims": {"A1": 64, "A2": 2},
                                   "trials": 60, "seed": 7}))
        code, out = run(["--config", str(cfg)], capsys)
        assert code == 0
        res = json.loads(out)["results"]
        assert res["bound"] == pytest.approx(0.1767766952966369)
        assert res["mean_l1"] <= res["bound"] + 4 * res["mc_stderr"]

    def test_missing_dims_is_usage_error(self, capsys):
        assert cli.main(["decouple"]) == 2


class TestSuiteCommand:
    def test_unknown_suite_is_usage_error(self, capsys):
        assert cli.main(["suite", "--name", "bogus"]) == 2

    def test_golden_suite_passes(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = cli.main(["suite", "--name", "golden", "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["results"]["passed"] is True
        assert all(report["results"]["checks"].values())


class TestFlagOverrides:
    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"command": "blackhole", "n": 6, "k": 2,
                                   "c": 2, "trials": 5, "seed": 3}))
        code, out = run(["--config", str(cfg), "--trials", "12"], capsys)
        assert code == 0
        assert json.loads(out)["config"]["trials"] == 12
