"""Tests for desired trajectories."""

import numpy as np
import pandas as pd
import pytest

from src.errors import SchemaError
from src.geometry import E1
from src.trajectory import (
    TABLE_COLUMNS,
    CircleTrajectory,
    HoverTrajectory,
    LineTrajectory,
    TableTrajectory,
    builtin_trajectory,
)
from tests.conftest import DATA_DIR


def test_hover_sample_is_static():
    sample = HoverTrajectory(point=(1.0, 2.0, -1.0)).sample(3.0)
    assert np.array_equal(sample.x, [1.0, 2.0, -1.0])
    assert np.array_equal(sample.v, np.zeros(3))
    assert np.array_equal(sample.a, np.zeros(3))
    assert np.array_equal(sample.b1, E1)


def test_circle_kinematics():
    traj = CircleTrajectory(center=(0.0, 0.0, -1.0), radius=2.0, period=4.0)
    rate = 2.0 * np.pi / 4.0
    start = traj.sample(0.0)
    assert np.allclose(start.x, [2.0, 0.0, -1.0])
    assert np.allclose(start.v, [0.0, 2.0 * rate, 0.0])
    later = traj.sample(1.3)
    assert np.allclose(later.a, -rate**2 * (later.x - traj.center), atol=1e-12)


def test_line_holds_end_point():
    traj = LineTrajectory(start=(0.0, 0.0, 0.0), end=(2.0, 0.0, 0.0), duration=4.0)
    assert np.allclose(traj.sample(1.0).x, [0.5, 0.0, 0.0])
    assert np.allclose(traj.sample(1.0).v, [0.5, 0.0, 0.0])
    assert np.allclose(traj.sample(10.0).x, [2.0, 0.0, 0.0])
    assert np.array_equal(traj.sample(10.0).v, np.zeros(3))


def test_table_interpolates_and_clamps():
    rows = [
        [0.0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
        [1.0, 2, 0, -2, 0, 0, 0, 0, 0, 0, 0, 2, 0],
    ]
    traj = TableTrajectory(pd.DataFrame(rows, columns=TABLE_COLUMNS))
    mid = traj.sample(0.5)
    assert np.allclose(mid.x, [1.0, 0.0, -1.0])
    assert np.isclose(np.linalg.norm(mid.b1), 1.0)
    assert np.allclose(traj.sample(5.0).x, [2.0, 0.0, -2.0])


def test_table_missing_column():
    frame = pd.DataFrame([[0.0, 1.0]], columns=["t", "xd1"])
    with pytest.raises(SchemaError):
        TableTrajectory(frame)


def test_table_from_shipped_csv_matches_circle():
    table = TableTrajectory.from_csv(DATA_DIR / "trajectories" / "circle_r1_p10.csv")
    circle = CircleTrajectory(center=(0.0, 0.0, -1.0), radius=1.0, period=10.0)
    assert np.allclose(table.sample(2.0).x, circle.sample(2.0).x, atol=1e-9)
    assert np.allclose(table.sample(2.0).v, circle.sample(2.0).v, atol=1e-9)


def test_builtin_lookup():
    assert isinstance(builtin_trajectory("circle", radius=0.5), CircleTrajectory)
    with pytest.raises(ValueError):
        builtin_trajectory("spiral")
