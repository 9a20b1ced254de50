"""
Scenario files for hover simulations.

A scenario is a JSON document with SI-suffixed keys, for example

    {
      "name": "three_quad_hover",
      "payload": {"mass_kg": 1.5, "dims_m": [1.0, 0.8, 0.2]},
      "quad": {"mass_kg": 0.755, "inertia_kgm2": [0.0820, 0.0845, 0.1377]},
      "fleet_size": 3,
      "radius_policy": "side",
      "link_length_m": 1.0,
      "integrator": {"dt_s": 0.001, "t_final_s": 10.0}
    }

`fleet_size` may be "auto", in which case the planner picks n and the
attachment points. Explicit `attachments_m` override generated ones.
"""

import json
import logging
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.config import get_settings
from src.data_models import (
    Gains,
    IntegratorConfig,
    LinkSpec,
    PayloadParams,
    PlannerRequest,
    QuadrotorParams,
    RadiusPolicy,
)
from src.errors import ScenarioError
from src.planner import attachment_points, plan
from src.swarm.dynamics import hover_state, validate_links
from src.swarm.policies import InputPolicy, build_policy
from src.swarm.state import SwarmParams, SwarmState


logger = logging.getLogger(__name__)

DEFAULT_SCENARIO = "scenarios/three_quad_hover.json"
CENTROID_TOL = 1e-12


class Perturbations(BaseModel):
    """Deviations from the ideal hover set-up."""
    model_config = ConfigDict(populate_by_name=True)

    thrust_scale: Optional[list[float]] = Field(
        default=None,
        description="Per-quadrotor multiplier on the hover thrust"
    )
    x0: tuple[float, float, float] = Field(
        default=(0.0, 0.0, 0.0),
        alias="x0_m",
        description="Initial payload position (m)"
    )


class OutputPaths(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    series: Optional[str] = Field(default=None, alias="series_csv")
    column_map: Optional[str] = Field(default=None, alias="column_map")


class Scenario(BaseModel):
    """Everything needed to build and run one hover simulation."""
    model_config = ConfigDict(populate_by_name=True)

    name: str = "scenario"
    payload: PayloadParams = Field(default_factory=PayloadParams)
    quad: QuadrotorParams = Field(default_factory=QuadrotorParams)
    fleet_size: Union[int, Literal["auto"]] = Field(default="auto")
    link_length: float = Field(default=1.0, alias="link_length_m", gt=0)
    radius_policy: RadiusPolicy = Field(default=RadiusPolicy.SIDE)
    safety_factor: float = Field(default=1.2, ge=1.0)
    attachments: Optional[list[tuple[float, float, float]]] = Field(
        default=None,
        alias="attachments_m",
        description="Explicit attachment points in the payload frame (m)"
    )
    perturbations: Perturbations = Field(default_factory=Perturbations)
    policy: Literal["constant", "attitude_hold"] = "constant"
    gains: Optional[Gains] = None
    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)
    output: OutputPaths = Field(default_factory=OutputPaths)

    @model_validator(mode="after")
    def _consistent(self) -> "Scenario":
        if isinstance(self.fleet_size, int) and self.fleet_size < 1:
            raise ValueError(f"fleet_size must be >= 1 or 'auto', got {self.fleet_size}")
        if self.attachments is not None and self.fleet_size != "auto" and len(self.attachments) != self.fleet_size:
            raise ValueError(f"{len(self.attachments)} attachments given for fleet_size {self.fleet_size}")
        return self

    def links(self) -> list[LinkSpec]:
        """Resolve the fleet: explicit attachments, generated polygon, or the planner's choice."""
        if self.attachments is not None:
            links = [LinkSpec(rho=rho, length=self.link_length) for rho in self.attachments]
            centroid = np.mean(np.asarray(self.attachments, dtype=float)[:, :2], axis=0)
            if np.linalg.norm(centroid) > CENTROID_TOL:
                logger.warning(
                    f"Attachment centroid is off the payload centre by {centroid.tolist()} m; "
                    "equal hover thrusts will not balance exactly"
                )
        elif self.fleet_size == "auto":
            request = PlannerRequest(
                payload=self.payload,
                quad=self.quad,
                safety_factor=self.safety_factor,
                hover_height=self.link_length,
                radius_policy=self.radius_policy,
            )
            result = plan(request)
            if result.n < 1:
                raise ScenarioError(f"planner found no feasible fleet for scenario '{self.name}'")
            links = result.attachments
        else:
            links, _ = attachment_points(self.fleet_size, self.payload.dims, self.link_length, self.radius_policy)
        validate_links(self.payload, links)
        return links

    def swarm_params(self) -> SwarmParams:
        links = self.links()
        return SwarmParams(payload=self.payload, quads=[self.quad] * len(links), links=links)

    def initial_state(self, params: SwarmParams) -> SwarmState:
        return hover_state(params, self.perturbations.x0)

    def input_policy(self, params: SwarmParams) -> InputPolicy:
        scale = self.perturbations.thrust_scale
        if scale is not None and len(scale) != params.n:
            raise ScenarioError(f"thrust_scale has {len(scale)} entries for {params.n} quadrotors")
        return build_policy(self.policy, params, self.gains, scale)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Read and validate a scenario file.

    Raises:
        ScenarioError: unreadable file, invalid JSON or failed validation
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    try:
        return Scenario.model_validate(raw)
    except ValidationError as exc:
        raise ScenarioError(f"scenario {path} is invalid:\n{exc}") from exc


def default_scenario_path() -> Path:
    return get_settings().data_dir / DEFAULT_SCENARIO
