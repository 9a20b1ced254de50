"""
Fleet-size and attachment planner.

Quadrotors are placed on the vertices of a regular (cyclic) polygon centred
on the payload so that equal hover thrusts produce no net moment. The fleet
size comes from the thrust margin of one vehicle, is rounded up, then
multiplied by the safety factor F_S; spacing between neighbours must be at
least three propeller radii.

Usage:
    req = PlannerRequest(quad=QuadrotorParams(max_thrust=10.0, prop_radius=0.1))
    result = plan(req)
    print(result.scenario, result.n)
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from src.data_models import (
    ConfigurationPlan,
    LinkSpec,
    PlannerRequest,
    PlanScenario,
    RadiusPolicy,
    Recommendation,
)
from src.errors import BadCount
from src.swarm.state import SwarmParams


logger = logging.getLogger(__name__)

SPACING_FACTOR = 3.0
SPACING_TOL = 1e-12
# largest fleet tried when looking for the spacing limit
MAX_FLEET = 10_000


# =============================================================================
# Polygon geometry
# =============================================================================

def half_vertex_angle(n: int) -> float:
    """alpha = (n - 2) pi / (2 n)"""
    if n < 3:
        raise BadCount(f"a polygon needs at least 3 vertices, got {n}")
    return (n - 2) * math.pi / (2 * n)


def circumradius(n: int, dims: Sequence[float], policy: RadiusPolicy = RadiusPolicy.CIRCUMRADIUS) -> float:
    """
    Radius of the placement circle.

    CIRCUMRADIUS puts the vertices on the circle of diameter min(length, width).
    SIDE makes the polygon side equal to min(length, width); for n <= 2 both
    policies coincide.
    """
    if n < 1:
        raise BadCount(f"fleet size must be >= 1, got {n}")
    min_dim = min(dims[0], dims[1])
    if RadiusPolicy(policy) is RadiusPolicy.SIDE and n >= 3:
        return min_dim / (2.0 * math.sin(math.pi / n))
    return min_dim / 2.0


def side_length(n: int, r_circ: float) -> float:
    """Distance between neighbouring vehicles on the placement circle (inf for a single vehicle)."""
    if n < 1:
        raise BadCount(f"fleet size must be >= 1, got {n}")
    if n == 1:
        return math.inf
    if n == 2:
        return 2.0 * r_circ
    return 2.0 * r_circ * math.sin(math.pi / n)


def attachment_points(
    n: int,
    dims: Sequence[float],
    hover_height: float = 1.0,
    policy: RadiusPolicy = RadiusPolicy.CIRCUMRADIUS,
) -> tuple[list[LinkSpec], NDArray[np.float64]]:
    """
    Attachment points on the payload top face and the matching quadrotor start positions.

    Vertex i (1-based) sits at angle 2 pi i / n, so the last vehicle lands on
    the +x axis. Links get length `hover_height` and start vertical, putting
    each quadrotor at rho_i - hover_height e3 (z-down).
    """
    if n < 1:
        raise BadCount(f"fleet size must be >= 1, got {n}")
    z = -dims[2] / 2.0
    r = circumradius(n, dims, policy)

    if n == 1:
        points = np.array([[0.0, 0.0, z]])
    elif n == 2:
        points = np.array([[0.0, r, z], [0.0, -r, z]])
    else:
        theta = 2.0 * np.pi * np.arange(1, n + 1) / n
        points = np.column_stack([r * np.cos(theta), r * np.sin(theta), np.full(n, z)])

    links = [LinkSpec(rho=tuple(float(c) for c in p), length=hover_height) for p in points]
    starts = points - hover_height * np.array([0.0, 0.0, 1.0])
    return links, starts


# =============================================================================
# Constraints
# =============================================================================

def min_quadrotors(payload_weight: float, quad_weight: float, thrust: float) -> float:
    """
    n_raw = W_payload / (T - W_quad).

    Returns inf when the margin is exactly zero; a negative value means a
    single vehicle cannot even lift itself.
    """
    margin = thrust - quad_weight
    if margin == 0.0:
        return math.inf
    return payload_weight / margin


def spacing_ok(n: int, prop_radius: float, r_circ: float) -> bool:
    """Neighbours at least three propeller radii apart."""
    if n < 1:
        raise BadCount(f"fleet size must be >= 1, got {n}")
    if n == 1:
        return True
    return side_length(n, r_circ) + SPACING_TOL >= SPACING_FACTOR * prop_radius


def _fits(n: int, req: PlannerRequest) -> bool:
    return spacing_ok(n, req.quad.prop_radius, circumradius(n, req.payload.dims, req.radius_policy))


def _max_spaced_fleet(req: PlannerRequest) -> int:
    """Largest n passing the spacing rule at the requested radius (1 if none)."""
    n_max = 1
    for n in range(2, MAX_FLEET + 1):
        if not _fits(n, req):
            break
        n_max = n
    return n_max


def _thrust_feasible(n_raw: float) -> bool:
    return math.isfinite(n_raw) and n_raw > 0.0


def _fleet_sizes(n_raw: float, safety_factor: float) -> tuple[int, int]:
    # the epsilon keeps exact integers produced with round-off from rounding up
    n_min = max(1, math.ceil(n_raw - 1e-9))
    n_fs = max(1, math.floor(n_min * safety_factor + 0.5))
    return n_min, n_fs


# =============================================================================
# Planning
# =============================================================================

def recommend(req: PlannerRequest, n_min: Optional[int], n_fs: Optional[int]) -> Recommendation:
    """
    Alternative specs for a fleet that does not fit as requested.

    max_radius: largest propeller radius letting n_FS vehicles fit
    (None when thrust alone rules the fleet out).
    min_thrust: per-vehicle thrust that lets the largest fleet fitting at the
    requested radius carry the payload, with F_S applied when that fleet has
    more than one vehicle.
    """
    g = req.quad.gravity
    payload_weight = req.payload.mass * g
    quad_weight = req.quad.weight

    max_radius = None
    if n_fs is not None and n_fs > 1:
        r_circ = circumradius(n_fs, req.payload.dims, req.radius_policy)
        max_radius = side_length(n_fs, r_circ) / SPACING_FACTOR

    n_max = _max_spaced_fleet(req)
    factor = req.safety_factor if n_max > 1 else 1.0
    min_thrust = (payload_weight / n_max + quad_weight) * factor
    return Recommendation(max_radius=max_radius, min_thrust=min_thrust)


def plan(req: PlannerRequest) -> ConfigurationPlan:
    """Classify the request as Feasible, FeasibleWithCaution or Infeasible and lay out the fleet."""
    g = req.quad.gravity
    n_raw = min_quadrotors(req.payload.mass * g, req.quad.weight, req.quad.max_thrust)
    dims = req.payload.dims

    n_min: Optional[int] = None
    n_fs: Optional[int] = None
    if not _thrust_feasible(n_raw):
        scenario, n = PlanScenario.INFEASIBLE, 0
    else:
        n_min, n_fs = _fleet_sizes(n_raw, req.safety_factor)
        if _fits(n_fs, req):
            scenario, n = PlanScenario.FEASIBLE, n_fs
        elif _fits(n_min, req):
            scenario, n = PlanScenario.FEASIBLE_WITH_CAUTION, n_min
        else:
            scenario, n = PlanScenario.INFEASIBLE, 0

    recommendation = None if scenario is PlanScenario.FEASIBLE else recommend(req, n_min, n_fs)
    attachments: list[LinkSpec] = []
    if n >= 1:
        attachments, _ = attachment_points(n, dims, req.hover_height, req.radius_policy)

    result = ConfigurationPlan(
        n=n,
        alpha=half_vertex_angle(n) if n >= 3 else None,
        r_circ=circumradius(max(n, 1), dims, req.radius_policy),
        attachments=attachments,
        scenario=scenario,
        recommendation=recommendation,
        n_raw=n_raw,
        n_min=n_min,
        n_fs=n_fs,
    )
    logger.info(
        f"Plan T={req.quad.max_thrust:g} N r_prop={req.quad.prop_radius:g} m: "
        f"{scenario.value} n={n} (n_raw={n_raw:.4f}, n_min={n_min}, n_FS={n_fs})"
    )
    return result


def plan_sweep(requests: Sequence[PlannerRequest], workers: Optional[int] = None) -> list[ConfigurationPlan]:
    """Plan many requests concurrently; results come back in input order."""
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(plan, requests))


def swarm_params_for(result: ConfigurationPlan, req: PlannerRequest) -> SwarmParams:
    """Homogeneous swarm described by a plan with n >= 1."""
    if result.n < 1:
        raise BadCount(f"plan has no vehicles (scenario {result.scenario.value})")
    return SwarmParams(
        payload=req.payload,
        quads=[req.quad] * result.n,
        links=list(result.attachments),
    )
