"""
Desired trajectories for single-quadrotor tracking.

Built-ins (hover, circle, line) are analytic; TableTrajectory reads a CSV
with the header

    t,xd1,xd2,xd3,vd1,vd2,vd3,ad1,ad2,ad3,b1d1,b1d2,b1d3

and interpolates linearly between samples. Positions are in the z-down
inertial frame, so "up" is negative z.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from src.errors import SchemaError
from src.geometry import E1, Vec3, normalize


TABLE_COLUMNS = [
    "t",
    "xd1", "xd2", "xd3",
    "vd1", "vd2", "vd3",
    "ad1", "ad2", "ad3",
    "b1d1", "b1d2", "b1d3",
]


@dataclass(frozen=True)
class TrajectorySample:
    """Desired state at one instant."""
    x: Vec3
    v: Vec3
    a: Vec3
    b1: Vec3
    omega: Vec3 = field(default_factory=lambda: np.zeros(3))
    omega_dot: Vec3 = field(default_factory=lambda: np.zeros(3))


class DesiredTrajectory(ABC):
    """
    Map t -> (x_d, v_d, a_d, b_1d, Omega_d, Omega_dot_d).

    Usage:
        traj = CircleTrajectory(radius=1.0, period=10.0)
        sample = traj.sample(2.5)
    """

    @abstractmethod
    def sample(self, t: float) -> TrajectorySample:
        """Evaluate the trajectory at time t."""
        pass


class HoverTrajectory(DesiredTrajectory):
    """Hold a fixed point with a fixed heading."""

    def __init__(self, point=(0.0, 0.0, 0.0), heading=E1):
        self.point = np.asarray(point, dtype=float)
        self.heading = normalize(heading)

    def sample(self, t: float) -> TrajectorySample:
        zero = np.zeros(3)
        return TrajectorySample(x=self.point.copy(), v=zero, a=zero.copy(), b1=self.heading)


class CircleTrajectory(DesiredTrajectory):
    """Horizontal circle about `center` at constant speed."""

    def __init__(self, center=(0.0, 0.0, 0.0), radius: float = 1.0, period: float = 10.0, heading=E1):
        self.center = np.asarray(center, dtype=float)
        self.radius = radius
        self.rate = 2.0 * np.pi / period
        self.heading = normalize(heading)

    def sample(self, t: float) -> TrajectorySample:
        c, s = np.cos(self.rate * t), np.sin(self.rate * t)
        r, w = self.radius, self.rate
        return TrajectorySample(
            x=self.center + r * np.array([c, s, 0.0]),
            v=r * w * np.array([-s, c, 0.0]),
            a=-r * w**2 * np.array([c, s, 0.0]),
            b1=self.heading,
        )


class LineTrajectory(DesiredTrajectory):
    """Constant-velocity segment from `start` to `end`, then hold `end`."""

    def __init__(self, start=(0.0, 0.0, 0.0), end=(1.0, 0.0, 0.0), duration: float = 5.0, heading=E1):
        self.start = np.asarray(start, dtype=float)
        self.end = np.asarray(end, dtype=float)
        self.duration = duration
        self.heading = normalize(heading)

    def sample(self, t: float) -> TrajectorySample:
        zero = np.zeros(3)
        if t >= self.duration:
            return TrajectorySample(x=self.end.copy(), v=zero, a=zero.copy(), b1=self.heading)
        velocity = (self.end - self.start) / self.duration
        return TrajectorySample(
            x=self.start + velocity * max(t, 0.0),
            v=velocity,
            a=zero,
            b1=self.heading,
        )


class TableTrajectory(DesiredTrajectory):
    """Sampled trajectory, linearly interpolated and clamped at both ends."""

    def __init__(self, frame: pd.DataFrame):
        missing = [c for c in TABLE_COLUMNS if c not in frame.columns]
        if missing:
            raise SchemaError(f"trajectory table is missing columns: {missing}")
        if len(frame) == 0:
            raise SchemaError("trajectory table has no rows")
        frame = frame.sort_values("t")
        self._t = frame["t"].to_numpy(dtype=float)
        self._values = {c: frame[c].to_numpy(dtype=float) for c in TABLE_COLUMNS[1:]}

    @classmethod
    def from_csv(cls, path: str | Path) -> "TableTrajectory":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"trajectory table not found: {path}")
        return cls(pd.read_csv(path))

    def _vec(self, t: float, prefix: str) -> Vec3:
        return np.array([
            np.interp(t, self._t, self._values[f"{prefix}{k}"]) for k in (1, 2, 3)
        ])

    def sample(self, t: float) -> TrajectorySample:
        return TrajectorySample(
            x=self._vec(t, "xd"),
            v=self._vec(t, "vd"),
            a=self._vec(t, "ad"),
            b1=normalize(self._vec(t, "b1d")),
        )


def builtin_trajectory(name: str, **kwargs) -> DesiredTrajectory:
    """Look up a built-in trajectory by name (hover, circle, line)."""
    builders = {
        "hover": HoverTrajectory,
        "circle": CircleTrajectory,
        "line": LineTrajectory,
    }
    if name not in builders:
        raise ValueError(f"unknown trajectory '{name}', expected one of {sorted(builders)}")
    return builders[name](**kwargs)
