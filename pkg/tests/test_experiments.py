import numpy as np
import pytest

from udw_response.experiments import (
    SweepAxis,
    SweepSpec,
    figure_dataset,
    run_sweep,
    run_validation,
)


def small_spec(**overrides):
    base = dict(
        sweep_id="unit",
        fixed={"m": 10.0, "omega": 5.0, "lambda": 1.0, "tau_i": 0.0, "x0": 0.0, "k0": 0.0},
        axes=(SweepAxis("delta_tau", 0.0, 1.0, 2),),
        outputs=("p_v",),
    )
    base.update(overrides)
    return SweepSpec(**base)


def parse_csv(path):
    header = {}
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    data_lines = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            header[key] = value
        else:
            data_lines.append(line)
    columns = data_lines[0].split(",")
    rows = [line.split(",") for line in data_lines[1:]]
    return header, columns, rows


class TestSweepSpecValidation:
    def test_round_trip_from_dict(self):
        doc = {
            "sweep_id": "demo",
            "fixed": {"m": 10, "omega": 5, "tau_i": 0},
            "axes": [{"name": "delta_tau", "min": 0, "max": 2, "steps": 3}],
            "outputs": ["p_v", "p_m"],
            "quadrature": {"rel_tol": 1e-8},
        }
        spec = SweepSpec.from_dict(doc)
        assert spec.axes[0].steps == 3
        assert spec.quadrature.rel_tol == 1e-8

    def test_rejects_no_axes(self):
        with pytest.raises(ValueError):
            small_spec(axes=())

    def test_rejects_three_axes(self):
        with pytest.raises(ValueError):
            small_spec(axes=(SweepAxis("delta_tau", 0, 1, 2),
                             SweepAxis("x0", 0, 1, 2),
                             SweepAxis("k0", 0, 1, 2)))

    def test_rejects_single_step_axis(self):
        with pytest.raises(ValueError):
            small_spec(axes=(SweepAxis("delta_tau", 0, 1, 1),))

    def test_rejects_overlap_of_fixed_and_swept(self):
        with pytest.raises(ValueError):
            small_spec(axes=(SweepAxis("omega", 0, 1, 2),))

    def test_rejects_unknown_parameter(self):
        with pytest.raises(ValueError):
            small_spec(fixed={"m": 10.0, "omega": 5.0, "mass": 1.0, "tau_f": 1.0})

    def test_requires_exactly_one_window_parameter(self):
        with pytest.raises(ValueError):
            small_spec(fixed={"m": 10.0, "omega": 5.0, "tau_f": 1.0, "delta_tau": 1.0},
                       axes=(SweepAxis("x0", 0, 1, 2),))
        with pytest.raises(ValueError):
            small_spec(fixed={"m": 10.0, "omega": 5.0},
                       axes=(SweepAxis("x0", 0, 1, 2),))

    def test_rejects_unknown_output(self):
        with pytest.raises(ValueError):
            small_spec(outputs=("p_q",))


class TestRunSweep:
    def test_first_row_zero_window(self):
        dataset = run_sweep(small_spec())
        assert dataset.columns[:2] == ("delta_tau", "p_v")
        assert float(dataset.rows[0][1]) == 0.0
        assert dataset.n_failed == 0

    def test_rows_in_row_major_order(self):
        spec = small_spec(axes=(SweepAxis("delta_tau", 0.0, 1.0, 2),
                                SweepAxis("x0", 0.0, 1.0, 3)),
                          fixed={"m": 10.0, "omega": 5.0, "k0": 0.0},
                          outputs=("p_m",))
        dataset = run_sweep(spec)
        grid = [(float(r[0]), float(r[1])) for r in dataset.rows]
        assert grid == [(dt, x) for dt in (0.0, 1.0) for x in (0.0, 0.5, 1.0)]

    def test_byte_identical_reruns(self, tmp_path):
        spec = small_spec(outputs=("p_v", "p_m"))
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        run_sweep(spec).write_csv(first)
        run_sweep(spec).write_csv(second)
        assert first.read_bytes() == second.read_bytes()

    def test_failures_recorded_not_fatal(self):
        # x0 = 60 underflows P_m, so the normalized ratio is undefined there
        spec = small_spec(
            fixed={"m": 10.0, "omega": 10.0, "delta_tau": 4.0},
            axes=(SweepAxis("x0", 0.0, 60.0, 2),),
            outputs=("ratio_normalized",),
        )
        dataset = run_sweep(spec)
        assert dataset.n_failed == 1
        good, bad = dataset.rows
        assert good[-1] == "" and float(good[1]) == 1.0
        assert "ZeroDivisionError" in bad[-1] and bad[1] == "nan"

    def test_gap_symmetry_column(self, tmp_path):
        dataset = run_sweep(figure_dataset("fig2", steps=41))
        path = tmp_path / "fig2.csv"
        dataset.write_csv(path)
        _, columns, rows = parse_csv(path)
        omega = np.array([float(r[columns.index("omega")]) for r in rows])
        tau_i = np.array([float(r[columns.index("tau_i")]) for r in rows])
        pm = np.array([float(r[columns.index("p_m")]) for r in rows])
        for ti in np.unique(tau_i):
            sel = tau_i == ti
            om, vals = omega[sel], pm[sel]
            order = np.argsort(om)
            om, vals = om[order], vals[order]
            assert np.allclose(vals, vals[::-1], rtol=1e-9, atol=0.0)

    def test_parallel_matches_serial(self, tmp_path):
        spec = small_spec(axes=(SweepAxis("delta_tau", 0.0, 2.0, 5),),
                          outputs=("p_v", "p_m"))
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        run_sweep(spec, jobs=1).write_csv(serial)
        run_sweep(spec, jobs=2).write_csv(parallel)
        assert serial.read_bytes() == parallel.read_bytes()


class TestFigureDatasets:
    def test_unknown_id_rejected(self):
        with pytest.raises(ValueError):
            figure_dataset("fig9")

    def test_fig1_axes(self):
        spec = figure_dataset("fig1")
        assert [ax.name for ax in spec.axes] == ["delta_tau", "tau_i"]
        assert spec.axes[1].steps == 2
        assert list(spec.axes[1].values()) == [0.0, 2.0]
        assert spec.fixed["omega"] == pytest.approx(10.0 - np.pi)

    def test_fig4_starts_at_switch_on_zero(self):
        spec = figure_dataset("fig4")
        assert spec.fixed["tau_i"] == 0.0

    def test_fig5_contains_reference_point(self):
        spec = figure_dataset("fig5")
        values0 = spec.axes[0].values()
        values1 = spec.axes[1].values()
        assert 0.0 in values0 and 0.0 in values1
        assert "ratio_normalized" in spec.outputs

    def test_steps_override_spares_series_axes(self):
        spec = figure_dataset("fig1", steps=11)
        assert spec.axes[0].steps == 11
        assert spec.axes[1].steps == 2

    def test_header_is_self_describing(self, tmp_path):
        dataset = run_sweep(figure_dataset("fig4", steps=3))
        path = tmp_path / "fig4.csv"
        dataset.write_csv(path)
        header, _, _ = parse_csv(path)
        assert float(header["tau_i"]) == 0.0
        assert float(header["m"]) == 10.0
        assert header["axis_x0"].endswith(":3")
        assert "artifact_version" in header


@pytest.fixture(scope="module")
def fast_report():
    return run_validation(fast=True)


class TestValidationFast:
    def test_fast_suite_passes(self, fast_report):
        failed = [c.check_id for c in fast_report.checks if not c.passed]
        assert fast_report.passed, f"failed checks: {failed}"
        assert {"analytic_vs_quad", "vacuum_oracle", "reduction_1d_vs_2d"} <= {
            c.check_id for c in fast_report.checks}

    def test_report_serializes(self, fast_report):
        doc = fast_report.to_dict()
        assert doc["passed"] is True
        assert all("measured" in c for c in doc["checks"])
