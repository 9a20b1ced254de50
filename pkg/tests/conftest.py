"""Shared fixtures: the three-quadrotor hover example and seeded random draws."""

from pathlib import Path

import numpy as np
import pytest

from src.data_models import PayloadParams, QuadrotorParams, RadiusPolicy
from src.geometry import exp_so3
from src.planner import attachment_points
from src.swarm.state import SwarmParams


DATA_DIR = Path(__file__).resolve().parent.parent / "data"
HOVER_SCENARIO = DATA_DIR / "scenarios" / "three_quad_hover.json"
TRIMMED_SCENARIO = DATA_DIR / "scenarios" / "three_quad_trimmed.json"


def make_swarm(n: int, policy: RadiusPolicy = RadiusPolicy.CIRCUMRADIUS, **quad_kwargs) -> SwarmParams:
    """Homogeneous swarm around the 1 x 0.8 x 0.2 m payload with generated attachments."""
    payload = PayloadParams()
    links, _ = attachment_points(n, payload.dims, 1.0, policy)
    quad = QuadrotorParams(**quad_kwargs)
    return SwarmParams(payload=payload, quads=[quad] * n, links=links)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return exp_so3(axis * rng.uniform(0.0, np.pi))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def quad() -> QuadrotorParams:
    return QuadrotorParams()


@pytest.fixture
def hover_example() -> SwarmParams:
    """Three quadrotors, polygon side equal to the payload width."""
    return make_swarm(3, RadiusPolicy.SIDE)
