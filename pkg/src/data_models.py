"""
Data Models for swarm-sling

Defines Pydantic models for:
1. Physical parameters (quadrotor, payload, links) and controller gains
2. Planner requests and configuration plans
3. Integrator configuration

JSON keys carry SI-unit suffixes (mass_kg, max_thrust_n, ...); Python
attribute names are plain. Both spellings are accepted on input.
"""

from enum import Enum
from functools import cached_property
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# =============================================================================
# Enums
# =============================================================================

class RadiusPolicy(str, Enum):
    """
    How the placement circle is sized from the payload footprint:
    - CIRCUMRADIUS: circle radius = min(length, width) / 2
    - SIDE: polygon side = min(length, width)
    """
    CIRCUMRADIUS = "circumradius"
    SIDE = "side"


class PlanScenario(str, Enum):
    """Outcome classes of the fleet-size planner."""
    FEASIBLE = "Feasible"
    FEASIBLE_WITH_CAUTION = "FeasibleWithCaution"
    INFEASIBLE = "Infeasible"


# =============================================================================
# Helpers
# =============================================================================

DEFAULT_QUAD_INERTIA = (0.0820, 0.0845, 0.1377)


def _as_inertia(value) -> list[list[float]]:
    """Accept a 3-vector (diagonal) or a 3x3 nested list."""
    arr = np.asarray(value, dtype=float)
    if arr.shape == (3,):
        arr = np.diag(arr)
    if arr.shape != (3, 3):
        raise ValueError(f"inertia must be 3 values or 3x3, got shape {arr.shape}")
    return arr.tolist()


def _check_spd(matrix: list[list[float]], name: str) -> None:
    arr = np.asarray(matrix, dtype=float)
    if not np.allclose(arr, arr.T, rtol=0.0, atol=1e-12):
        raise ValueError(f"{name} must be symmetric")
    if np.min(np.linalg.eigvalsh(arr)) <= 0.0:
        raise ValueError(f"{name} must be positive definite")


# =============================================================================
# Physical parameters
# =============================================================================

class QuadrotorParams(BaseModel):
    """
    Physical constants of one quadrotor.

    Axis convention is z-down: gravity acts along +e3 and thrust along
    -R e3.
    """
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    mass: float = Field(
        default=0.755,
        alias="mass_kg",
        gt=0,
        description="Vehicle mass (kg)"
    )
    inertia: list[list[float]] = Field(
        default_factory=lambda: _as_inertia(DEFAULT_QUAD_INERTIA),
        alias="inertia_kgm2",
        description="Body inertia (kg m^2); 3 values are read as a diagonal"
    )
    arm_length: float = Field(
        default=0.315,
        alias="arm_length_m",
        gt=0,
        description="Rotor arm length d (m)"
    )
    torque_coeff: float = Field(
        default=8.004e-4,
        alias="torque_coeff_m",
        gt=0,
        description="Rotor torque-to-thrust coefficient c_tau_f (m)"
    )
    gravity: float = Field(
        default=9.81,
        alias="gravity_mps2",
        gt=0,
        description="Gravitational acceleration (m/s^2)"
    )
    max_thrust: float = Field(
        default=20.0,
        alias="max_thrust_n",
        gt=0,
        description="Total thrust capability of the vehicle T_max (N)"
    )
    prop_radius: float = Field(
        default=0.1,
        alias="prop_radius_m",
        gt=0,
        description="Centre-to-propeller-tip radius (m)"
    )

    @field_validator("inertia", mode="before")
    @classmethod
    def _normalize_inertia(cls, value):
        return _as_inertia(value)

    @model_validator(mode="after")
    def _inertia_spd(self) -> "QuadrotorParams":
        _check_spd(self.inertia, "quadrotor inertia")
        return self

    @cached_property
    def J(self) -> np.ndarray:
        return np.asarray(self.inertia, dtype=float)

    @property
    def weight(self) -> float:
        """m g in newtons."""
        return self.mass * self.gravity


class PayloadParams(BaseModel):
    """Rigid rectangular payload."""
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    mass: float = Field(
        default=1.5,
        alias="mass_kg",
        gt=0,
        description="Payload mass m_0 (kg)"
    )
    dims: tuple[float, float, float] = Field(
        default=(1.0, 0.8, 0.2),
        alias="dims_m",
        description="Box length, width, height (m)"
    )
    inertia: Optional[list[list[float]]] = Field(
        default=None,
        alias="inertia_kgm2",
        description="Body inertia J_0 (kg m^2); solid-box value when omitted"
    )

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, dims: tuple[float, float, float]) -> tuple[float, float, float]:
        if min(dims) <= 0:
            raise ValueError(f"payload dimensions must be positive, got {dims}")
        return dims

    @field_validator("inertia", mode="before")
    @classmethod
    def _normalize_inertia(cls, value):
        return None if value is None else _as_inertia(value)

    @model_validator(mode="after")
    def _inertia_spd(self) -> "PayloadParams":
        if self.inertia is not None:
            _check_spd(self.inertia, "payload inertia")
        return self

    @cached_property
    def J(self) -> np.ndarray:
        if self.inertia is not None:
            return np.asarray(self.inertia, dtype=float)
        length, width, height = self.dims
        k = self.mass / 12.0
        return np.diag([
            k * (width**2 + height**2),
            k * (length**2 + height**2),
            k * (length**2 + width**2),
        ])


class LinkSpec(BaseModel):
    """A massless rigid cable attached at `rho` (payload frame)."""
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    rho: tuple[float, float, float] = Field(
        ...,
        alias="rho_m",
        description="Attachment point in the payload body frame (m)"
    )
    length: float = Field(
        default=1.0,
        alias="length_m",
        gt=0,
        description="Cable length l (m)"
    )


class Gains(BaseModel):
    """Geometric tracking controller gains."""
    model_config = ConfigDict(frozen=True)

    k_x: float = Field(..., gt=0, description="Position gain (N/m)")
    k_v: float = Field(..., gt=0, description="Velocity gain (N s/m)")
    k_r: float = Field(default=8.81, gt=0, description="Attitude gain (N m)")
    k_omega: float = Field(default=2.54, gt=0, description="Body-rate gain (N m s)")

    @classmethod
    def default_for(cls, params: QuadrotorParams) -> "Gains":
        """
        Shipped defaults: k_x = 4 m, k_v = 2.8 m, k_R = 8.81, k_Omega = 2.54.

        The position loop (natural frequency 2 rad/s, damping 0.7) must stay
        well below the slowest roll/pitch pole of the attitude loop (about
        -3.95 rad/s) while the built-in trajectories feed Omega_d = 0.
        """
        return cls(k_x=4.0 * params.mass, k_v=2.8 * params.mass)


# =============================================================================
# Planner models
# =============================================================================

class PlannerRequest(BaseModel):
    """Inputs of the fleet-size / placement planner."""
    model_config = ConfigDict(frozen=True)

    payload: PayloadParams = Field(default_factory=PayloadParams)
    quad: QuadrotorParams = Field(default_factory=QuadrotorParams)
    safety_factor: float = Field(
        default=1.2,
        ge=1.0,
        description="Multiplier on the minimum fleet size F_S"
    )
    hover_height: float = Field(
        default=1.0,
        gt=0,
        description="Height of the quadrotors above the attachment points (m)"
    )
    radius_policy: RadiusPolicy = Field(default=RadiusPolicy.CIRCUMRADIUS)


class Recommendation(BaseModel):
    """Alternative specs that would make the requested fleet fit."""
    max_radius: Optional[float] = Field(
        default=None,
        description="Largest propeller radius letting n_FS vehicles fit (m)"
    )
    min_thrust: float = Field(
        ...,
        description="Smallest per-vehicle thrust that works at the requested radius (N)"
    )


class ConfigurationPlan(BaseModel):
    """Planner verdict with the generated attachment geometry."""
    n: int = Field(..., ge=0, description="Fleet size (0 when infeasible)")
    alpha: Optional[float] = Field(
        default=None,
        description="Polygon half vertex angle (rad); None for n < 3"
    )
    r_circ: float = Field(..., description="Placement circle radius (m)")
    attachments: list[LinkSpec] = Field(default_factory=list)
    scenario: PlanScenario
    recommendation: Optional[Recommendation] = None
    n_raw: float = Field(..., description="Unrounded thrust-limited fleet size")
    n_min: Optional[int] = Field(default=None, description="ceil(n_raw)")
    n_fs: Optional[int] = Field(default=None, description="round(n_min * F_S)")

    def to_report(self) -> dict:
        """JSON report layout shared by the CLI and the HTTP service."""
        return {
            "n": self.n,
            "alpha_rad": self.alpha,
            "r_circ_m": self.r_circ,
            "scenario": self.scenario.value,
            "attachments": [list(link.rho) for link in self.attachments],
            "link_length_m": self.attachments[0].length if self.attachments else None,
            "recommendation": None if self.recommendation is None else {
                "max_radius_m": self.recommendation.max_radius,
                "min_thrust_N": self.recommendation.min_thrust,
            },
        }


# =============================================================================
# Integrator
# =============================================================================

class IntegratorConfig(BaseModel):
    """Fixed-step RK4 settings."""
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    dt: float = Field(default=1e-3, alias="dt_s", gt=0, description="Step size (s)")
    t_final: float = Field(
        default=10.0,
        alias="t_final_s",
        ge=0,
        description="Horizon (s); 0 yields the initial sample only"
    )
    retraction_every: int = Field(
        default=1,
        ge=1,
        description="Steps between manifold projections"
    )

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))
