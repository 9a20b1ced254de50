"""Tests for the fleet-size and attachment planner."""

import json
import math

import numpy as np
import pytest

from src.data_models import PayloadParams, PlannerRequest, PlanScenario, QuadrotorParams, RadiusPolicy
from src.errors import BadCount
from src.planner import (
    attachment_points,
    circumradius,
    half_vertex_angle,
    min_quadrotors,
    plan,
    plan_sweep,
    side_length,
    spacing_ok,
    swarm_params_for,
)
from src.swarm import hover_inputs, hover_state, swarm_derivatives


PAYLOAD_WEIGHT = 14.715
QUAD_WEIGHT = 7.4066

FEASIBLE = PlanScenario.FEASIBLE
CAUTION = PlanScenario.FEASIBLE_WITH_CAUTION
INFEASIBLE = PlanScenario.INFEASIBLE


def request(thrust: float, radius: float, **kwargs) -> PlannerRequest:
    quad = QuadrotorParams(mass=QUAD_WEIGHT / 9.81, max_thrust=thrust, prop_radius=radius)
    return PlannerRequest(payload=PayloadParams(mass=1.5), quad=quad, **kwargs)


# =============================================================================
# Geometry
# =============================================================================

class TestPolygon:

    @pytest.mark.parametrize("n, expected", [(3, math.pi / 6), (4, math.pi / 4), (6, math.pi / 3), (7, 5 * math.pi / 14)])
    def test_half_vertex_angle(self, n, expected):
        assert half_vertex_angle(n) == pytest.approx(expected, abs=1e-15)

    def test_half_vertex_angle_needs_polygon(self):
        with pytest.raises(BadCount):
            half_vertex_angle(2)

    def test_side_length_special_cases(self):
        assert side_length(1, 0.4) == math.inf
        assert side_length(2, 0.4) == pytest.approx(0.8)
        assert side_length(6, 0.4) == pytest.approx(0.4)

    def test_side_policy_radius(self):
        assert circumradius(3, (1.0, 0.8, 0.2), RadiusPolicy.SIDE) == pytest.approx(0.8 / math.sqrt(3))
        assert circumradius(2, (1.0, 0.8, 0.2), RadiusPolicy.SIDE) == pytest.approx(0.4)

    def test_three_vehicles_side_policy(self):
        links, starts = attachment_points(3, (1.0, 0.8, 0.2), 1.0, RadiusPolicy.SIDE)
        rho = np.round([link.rho for link in links], 4)
        assert np.array_equal(rho, [[-0.2309, 0.4, -0.1], [-0.2309, -0.4, -0.1], [0.4619, 0.0, -0.1]])
        assert np.allclose(starts[:, 2], -1.1)
        assert all(link.length == 1.0 for link in links)

    def test_three_vehicles_circumradius_policy(self):
        links, _ = attachment_points(3, (1.0, 0.8, 0.2))
        expected = [[-0.2, 0.34641, -0.1], [-0.2, -0.34641, -0.1], [0.4, 0.0, -0.1]]
        assert np.allclose([link.rho for link in links], expected, atol=1e-5)

    def test_one_and_two_vehicles(self):
        one, _ = attachment_points(1, (1.0, 0.8, 0.2))
        assert one[0].rho == (0.0, 0.0, -0.1)
        two, _ = attachment_points(2, (1.0, 0.8, 0.2))
        assert [link.rho for link in two] == [(0.0, 0.4, -0.1), (0.0, -0.4, -0.1)]

    @pytest.mark.parametrize("n", [3, 4, 5, 7, 12, 190])
    def test_centroid_at_payload_centre(self, n):
        links, _ = attachment_points(n, (1.0, 0.8, 0.2))
        centroid = np.mean([link.rho for link in links], axis=0)
        assert np.linalg.norm(centroid[:2]) <= 1e-12

    def test_bad_count(self):
        with pytest.raises(BadCount):
            attachment_points(0, (1.0, 0.8, 0.2))


# =============================================================================
# Constraints
# =============================================================================

class TestConstraints:

    def test_min_quadrotors_examples(self):
        assert min_quadrotors(PAYLOAD_WEIGHT, QUAD_WEIGHT, 10.0) == pytest.approx(5.674, abs=1e-3)
        assert min_quadrotors(PAYLOAD_WEIGHT, QUAD_WEIGHT, 25.0) == pytest.approx(0.8364, abs=1e-4)
        assert min_quadrotors(PAYLOAD_WEIGHT, QUAD_WEIGHT, QUAD_WEIGHT) == math.inf
        assert min_quadrotors(PAYLOAD_WEIGHT, QUAD_WEIGHT, 5.0) < 0

    def test_min_quadrotors_decreases_with_thrust(self):
        values = [min_quadrotors(PAYLOAD_WEIGHT, QUAD_WEIGHT, t) for t in np.linspace(8.0, 40.0, 50)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_spacing_examples(self):
        assert not spacing_ok(7, 0.12, 0.4)
        assert spacing_ok(6, 0.12, 0.4)
        assert spacing_ok(1, 10.0, 0.4)


# =============================================================================
# Planning
# =============================================================================

TABLE = [
    (10.0, 0.10, 7, FEASIBLE),
    (10.0, 0.12, 6, CAUTION),
    (14.0, 0.18, 4, FEASIBLE),
    (20.0, 0.20, 2, FEASIBLE),
    (20.0, 0.50, 0, INFEASIBLE),
    (25.0, 0.50, 1, FEASIBLE),
    (7.5, 0.15, 0, INFEASIBLE),
    (12.0, 0.15, 5, FEASIBLE),
    (14.0, 0.15, 4, FEASIBLE),
    (16.0, 0.15, 2, FEASIBLE),
    (25.0, 0.15, 1, FEASIBLE),
]


class TestPlan:

    @pytest.mark.parametrize("thrust, radius, n, scenario", TABLE)
    def test_reference_grid(self, thrust, radius, n, scenario):
        result = plan(request(thrust, radius))
        assert result.n == n
        assert result.scenario is scenario
        assert len(result.attachments) == n
        assert (result.recommendation is None) == (scenario is FEASIBLE)

    def test_seven_vehicle_layout(self):
        result = plan(request(10.0, 0.1))
        assert result.alpha == pytest.approx(5 * math.pi / 14)
        assert result.r_circ == pytest.approx(0.4)
        assert result.n_min == 6 and result.n_fs == 7

    @pytest.mark.parametrize("thrust, radius, max_radius, min_thrust", [
        (10.0, 0.12, 0.115702, 11.8309),
        (20.0, 0.50, 0.266667, 22.1216),
        (7.5, 0.15, 0.004409, 12.4195),
    ])
    def test_recommendations(self, thrust, radius, max_radius, min_thrust):
        rec = plan(request(thrust, radius)).recommendation
        assert rec.max_radius == pytest.approx(max_radius, rel=1e-4)
        assert rec.min_thrust == pytest.approx(min_thrust, rel=1e-4)

    # published reference column; the 12.947 N thrust entry is only matched within 5%
    @pytest.mark.parametrize("thrust, radius, max_radius, min_thrust, thrust_rel", [
        (10.0, 0.12, 0.115318, 11.84, 0.01),
        (20.0, 0.50, 0.265781, 22.122, 0.01),
        (7.5, 0.15, 0.004394, 12.947, 0.05),
    ])
    def test_recommendations_match_reference_table(self, thrust, radius, max_radius, min_thrust, thrust_rel):
        rec = plan(request(thrust, radius)).recommendation
        assert rec.max_radius == pytest.approx(max_radius, rel=0.01)
        assert rec.min_thrust == pytest.approx(min_thrust, rel=thrust_rel)

    def test_no_radius_recommendation_when_thrust_is_short(self):
        rec = plan(request(5.0, 0.1)).recommendation
        assert rec.max_radius is None
        assert rec.min_thrust > 0

    def test_no_safety_margin(self):
        result = plan(request(25.0, 0.5, safety_factor=1.0))
        assert result.scenario is FEASIBLE
        assert result.n == 1

    def test_fleet_shrinks_with_thrust(self):
        results = [plan(request(t, 0.1)) for t in np.linspace(9.0, 40.0, 32)]
        sizes = [r.n for r in results if r.scenario is FEASIBLE]
        assert len(sizes) > 10
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))

    @pytest.mark.parametrize("thrust, radius, n, scenario", [row for row in TABLE if row[3] is not INFEASIBLE])
    def test_planned_fleet_hovers(self, thrust, radius, n, scenario):
        req = request(thrust, radius)
        params = swarm_params_for(plan(req), req)
        derivs = swarm_derivatives(hover_state(params), hover_inputs(params), params)
        assert np.linalg.norm(derivs.v0_dot) <= 1e-9
        assert np.linalg.norm(derivs.Omega0_dot) <= 1e-9

    def test_swarm_params_need_vehicles(self):
        req = request(7.5, 0.15)
        with pytest.raises(BadCount):
            swarm_params_for(plan(req), req)

    def test_sweep_preserves_order(self):
        requests = [request(t, r) for t, r, _, _ in TABLE]
        swept = plan_sweep(requests, workers=4)
        assert [p.n for p in swept] == [row[2] for row in TABLE]
        assert swept == [plan(r) for r in requests]

    def test_report_is_json(self):
        report = plan(request(10.0, 0.12)).to_report()
        decoded = json.loads(json.dumps(report))
        assert decoded["n"] == 6
        assert decoded["scenario"] == "FeasibleWithCaution"
        assert len(decoded["attachments"]) == 6
        assert decoded["link_length_m"] == 1.0
        assert decoded["recommendation"]["min_thrust_N"] == pytest.approx(11.8309, rel=1e-4)
