import json

import pytest

from udw_response.cli import main


def run_cli(*argv):
    return main(list(argv))


class TestPoint:
    def test_zero_window(self, capsys):
        code = run_cli("point", "--m", "10", "--omega", "5", "--delta-tau", "0",
                       "--x0", "0", "--k0", "0")
        out = capsys.readouterr().out
        assert code == 0
        values = dict(line.split("=", 1) for line in out.strip().splitlines())
        assert float(values["p_v"].split()[0]) == 0.0
        assert float(values["p_m"].split()[0]) == 0.0

    def test_negative_window_is_usage_error(self, capsys):
        code = run_cli("point", "--m", "10", "--omega", "5", "--delta-tau", "-1")
        err = capsys.readouterr().err
        assert code == 2
        assert "tau_f" in err  # names the violated invariant

    def test_resonance_flags(self, capsys):
        code = run_cli("point", "--m", "10", "--omega", "10", "--tau-i", "0",
                       "--delta-tau", "50", "--x0", "0", "--k0", "0")
        out = capsys.readouterr().out
        assert code == 0
        flags = [line for line in out.splitlines() if line.startswith("flags=")][0]
        assert "perturbativity" in flags and "resonance" in flags

    def test_csv_format(self, capsys):
        code = run_cli("point", "--m", "10", "--omega", "5", "--delta-tau", "3",
                       "--quantities", "p_v,p_avg", "--format", "csv")
        out = capsys.readouterr().out.splitlines()
        assert code == 0
        assert out[0] == "p_v,p_v_err,p_avg,p_avg_err,method,flags"
        assert len(out[1].split(",")) == 6

    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as exc:
            run_cli("point", "--m", "10", "--omega", "5", "--delta-tau", "1",
                    "--unknown-flag", "7")
        assert exc.value.code == 2

    def test_window_flags_mutually_exclusive(self):
        with pytest.raises(SystemExit) as exc:
            run_cli("point", "--m", "10", "--omega", "5",
                    "--delta-tau", "1", "--tau-f", "2")
        assert exc.value.code == 2

    def test_unknown_quantity(self, capsys):
        code = run_cli("point", "--m", "10", "--omega", "5", "--delta-tau", "1",
                       "--quantities", "p_x")
        assert code == 2


class TestFigure:
    def test_unknown_id(self, capsys):
        code = run_cli("figure", "--id", "fig9", "--out", "/tmp")
        assert code == 2

    def test_writes_dataset(self, tmp_path, capsys):
        code = run_cli("figure", "--id", "fig4", "--out", str(tmp_path), "--steps", "3")
        out = capsys.readouterr().out.strip()
        assert code == 0
        path = tmp_path / "fig4.csv"
        assert out == str(path)
        text = path.read_text()
        assert "# tau_i=0" in text

    def test_output_dir_from_environment(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("UDW_OUTPUT_DIR", str(tmp_path))
        code = run_cli("figure", "--id", "fig3", "--steps", "3")
        assert code == 0
        assert (tmp_path / "fig3.csv").exists()


class TestSweep:
    def test_config_driven_sweep(self, tmp_path, capsys):
        config = tmp_path / "sweep.json"
        out_csv = tmp_path / "out.csv"
        config.write_text(json.dumps({
            "sweep_id": "cli-test",
            "fixed": {"m": 10, "omega": 5, "lambda": 1, "tau_i": 0, "x0": 0, "k0": 0},
            "axes": [{"name": "delta_tau", "min": 0, "max": 1, "steps": 2}],
            "outputs": ["p_v"],
            "output_path": str(out_csv),
        }))
        code = run_cli("sweep", "--config", str(config))
        assert code == 0
        assert out_csv.exists()

    def test_missing_config_is_io_error(self, capsys):
        code = run_cli("sweep", "--config", "/nonexistent/config.json")
        assert code == 5

    def test_malformed_config_is_usage_error(self, tmp_path, capsys):
        config = tmp_path / "bad.json"
        config.write_text("{not json")
        assert run_cli("sweep", "--config", str(config)) == 2

    def test_invalid_spec_is_usage_error(self, tmp_path, capsys):
        config = tmp_path / "bad_spec.json"
        config.write_text(json.dumps({
            "fixed": {"m": 10, "omega": 5, "tau_f": 1, "delta_tau": 1},
            "axes": [{"name": "x0", "min": 0, "max": 1, "steps": 2}],
            "outputs": ["p_v"],
            "output_path": "x.csv",
        }))
        assert run_cli("sweep", "--config", str(config)) == 2


class TestValidate:
    def test_fast_validation_passes(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        code = run_cli("validate", "--fast", "--report", str(report_path))
        assert code == 0
        doc = json.loads(report_path.read_text())
        assert doc["passed"] is True
        err = capsys.readouterr().err
        assert "pass analytic_vs_quad" in err
