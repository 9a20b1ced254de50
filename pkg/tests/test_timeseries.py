"""Tests for hover CSV output, reading back and invariant checks."""

import numpy as np
import pandas as pd
import pytest

from src.data_models import IntegratorConfig
from src.errors import SchemaError
from src.integrator import simulate
from src.swarm import ConstantInputPolicy, hover_state
from src.timeseries import (
    check_frame,
    hover_columns,
    infer_fleet_size,
    read_series_csv,
    summarize_hover,
    summarize_tracking,
    write_column_map,
)
from tests.conftest import make_swarm


@pytest.fixture
def trimmed_run(hover_example):
    cfg = IntegratorConfig(dt=1e-3, t_final=0.05)
    policy = ConstantInputPolicy(hover_example, [0.9, 1.0, 1.05])
    return simulate(hover_state(hover_example), policy, hover_example, cfg)


def test_column_layout():
    columns = hover_columns(3)
    assert len(columns) == 19 + 3 * 21
    assert columns[:5] == ["t", "x0x", "x0y", "x0z", "v0x"]
    assert "R0_23" in columns and "R2_31" in columns
    assert columns[-1] == "W3z"
    assert infer_fleet_size(columns) == 3


def test_write_read_is_exact(tmp_path, hover_example, trimmed_run):
    path = trimmed_run.write_csv(tmp_path / "hover.csv", hover_example)
    frame = read_series_csv(path)
    expected = trimmed_run.to_frame(hover_example)
    assert list(frame.columns) == list(expected.columns)
    assert np.array_equal(frame.to_numpy(), expected.to_numpy())


def test_reconstructed_positions(hover_example):
    series = simulate(
        hover_state(hover_example), ConstantInputPolicy(hover_example), hover_example, IntegratorConfig(t_final=0.0)
    )
    row = series.to_frame(hover_example).iloc[0]
    assert row["x3x"] == pytest.approx(0.8 / np.sqrt(3))
    assert row["x3z"] == pytest.approx(-1.1)


def test_check_passes_on_simulated_run(hover_example, trimmed_run):
    report = check_frame(trimmed_run.to_frame(hover_example), hover_example)
    assert report.passed
    assert report.rows == 51
    assert set(report.defects) >= {"orthonormality", "determinant", "link_norm", "transversality", "link_length"}


def test_check_reports_earliest_violation(hover_example, trimmed_run):
    frame = trimmed_run.to_frame(hover_example)
    frame.loc[7, ["q2x", "q2y", "q2z"]] = [0.0, 0.0, 1.1]
    frame.loc[12, "R0_11"] = 1.5
    report = check_frame(frame)
    assert not report.passed
    assert report.violation.invariant == "link_norm"
    assert report.violation.row == 7
    assert report.violation.value == pytest.approx(0.1)


def test_check_flags_non_finite_rows(hover_example, trimmed_run):
    frame = trimmed_run.to_frame(hover_example)
    frame.loc[3, "v0x"] = np.nan
    report = check_frame(frame)
    assert report.violation.invariant == "finite"
    assert report.violation.row == 3


def test_check_rejects_mismatched_scenario(hover_example, trimmed_run):
    with pytest.raises(SchemaError):
        check_frame(trimmed_run.to_frame(hover_example), make_swarm(4))


def test_read_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(SchemaError):
        read_series_csv(path)


def test_read_header_only(tmp_path):
    path = tmp_path / "header.csv"
    path.write_text(",".join(hover_columns(1)) + "\n")
    with pytest.raises(SchemaError):
        read_series_csv(path)


def test_read_missing_columns(tmp_path):
    path = tmp_path / "partial.csv"
    pd.DataFrame({"t": [0.0], "x0x": [0.0]}).to_csv(path, index=False)
    with pytest.raises(SchemaError):
        read_series_csv(path)


def test_read_non_numeric_cell(tmp_path, hover_example, trimmed_run):
    frame = trimmed_run.to_frame(hover_example)
    frame["v0x"] = frame["v0x"].astype(object)
    frame.loc[2, "v0x"] = "oops"
    path = tmp_path / "garbled.csv"
    frame.to_csv(path, index=False)
    with pytest.raises(SchemaError, match=r"'v0x' at row 2"):
        read_series_csv(path)


def test_column_map(tmp_path):
    path = write_column_map(tmp_path / "columns.txt", hover_columns(1))
    lines = path.read_text().splitlines()
    assert lines[0] == "1 t"
    assert lines[4] == "5 v0x"
    assert len(lines) == 40


def test_hover_summary(hover_example, trimmed_run):
    summary = summarize_hover(trimmed_run.to_frame(hover_example))
    assert summary.samples == 51
    assert summary.t_final == pytest.approx(0.05)
    assert summary.max_abs_dz > 0.0
    assert summary.max_dx0 >= summary.max_abs_dz
    assert summary.max_link_norm_defect <= 1e-12
    assert "max|dz|" in summary.line()


def test_tracking_summary():
    t = np.linspace(0.0, 2.0, 21)
    frame = pd.DataFrame({"t": t, "ex1": 1.0 - t / 2.0, "ex2": 0.0, "ex3": 0.0, "Psi": 0.1 * (2.0 - t)})
    summary = summarize_tracking(frame, window_s=0.55)
    assert summary.final_ex_norm == pytest.approx(0.0)
    assert summary.max_ex_norm_in_window == pytest.approx(0.25)
    assert summary.max_psi_in_window == pytest.approx(0.05)
