"""
Pydantic models for the FastAPI endpoints.
"""

from datetime import datetime
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from src.data_models import PayloadParams, PlannerRequest, QuadrotorParams, RadiusPolicy
from src.timeseries import HoverSummary


# =============================================================================
# Enums
# =============================================================================

class TaskStatus(str, Enum):
    """Status of a hover simulation task."""
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


# =============================================================================
# Request Models
# =============================================================================

class PlanRequestBody(BaseModel):
    """Planner inputs with weights in newtons, as in the CLI."""
    thrust_n: float = Field(..., gt=0, description="Per-vehicle thrust capability (N)", examples=[10.0])
    quad_radius_m: float = Field(..., gt=0, description="Centre-to-propeller-tip radius (m)", examples=[0.1])
    payload_weight_n: float = Field(default=14.715, gt=0)
    quad_weight_n: float = Field(default=7.4066, gt=0)
    dims_m: tuple[float, float, float] = Field(default=(1.0, 0.8, 0.2))
    safety_factor: float = Field(default=1.2, ge=1.0)
    hover_height_m: float = Field(default=1.0, gt=0)
    radius_policy: RadiusPolicy = RadiusPolicy.CIRCUMRADIUS
    gravity_mps2: float = Field(default=9.81, gt=0)

    def to_request(self) -> PlannerRequest:
        g = self.gravity_mps2
        return PlannerRequest(
            payload=PayloadParams(mass=self.payload_weight_n / g, dims=self.dims_m),
            quad=QuadrotorParams(
                mass=self.quad_weight_n / g,
                gravity=g,
                max_thrust=self.thrust_n,
                prop_radius=self.quad_radius_m,
            ),
            safety_factor=self.safety_factor,
            hover_height=self.hover_height_m,
            radius_policy=self.radius_policy,
        )


# =============================================================================
# Response Models
# =============================================================================

class RecommendationInfo(BaseModel):
    max_radius_m: Optional[float]
    min_thrust_N: float


class PlanResponse(BaseModel):
    """Same layout as the JSON report written by `swarmsling plan`."""
    n: int
    alpha_rad: Optional[float]
    r_circ_m: float
    scenario: str
    attachments: list[list[float]]
    link_length_m: Optional[float]
    recommendation: Optional[RecommendationInfo]


class HoverTaskResponse(BaseModel):
    """Response when a hover simulation is queued."""
    task_id: str
    status: TaskStatus
    message: str


class HoverStatusResponse(BaseModel):
    """Status (and, once finished, the summary) of a hover simulation."""
    task_id: str
    status: TaskStatus
    scenario: str
    summary: Optional[HoverSummary] = None
    invariants_passed: Optional[bool] = None
    error: Optional[str] = None
    created_at: datetime
    completed_at: Optional[datetime] = None


class HealthResponse(BaseModel):
    """Health check response."""
    status: str
    version: str
    tasks: int
