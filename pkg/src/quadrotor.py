"""
Single quadrotor: plant model, geometric tracking controller, rotor mixing.

Axis convention is z-down throughout: e3 points along gravity, so the
plant reads

    x_dot = v
    m v_dot = m g e3 - f R e3
    R_dot = R hat(Omega)
    J Omega_dot = M - Omega x J Omega

and a hovering vehicle has R = I, f = m g. Sign errors in e3 are the most
common way to break this module; keep the convention when editing.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.data_models import Gains, QuadrotorParams
from src.errors import DegenerateHeading, SingularMixer, ZeroThrustDirection
from src.geometry import (
    E3,
    Mat3,
    Vec3,
    angular_velocity_error,
    attitude_error_fn,
    attitude_error_vec,
    hat,
    project_to_rotation,
)
from src.trajectory import DesiredTrajectory


logger = logging.getLogger(__name__)

EPS_THRUST = 1e-9
EPS_ALIGN = 1e-9


# =============================================================================
# State and command types
# =============================================================================

@dataclass(frozen=True)
class QuadState:
    """Position, velocity, attitude and body rate of one vehicle."""
    x: Vec3
    v: Vec3
    R: Mat3
    Omega: Vec3

    SIZE = 18

    @classmethod
    def hover_at(cls, x: ArrayLike = (0.0, 0.0, 0.0), R: ArrayLike | None = None) -> "QuadState":
        return cls(
            x=np.asarray(x, dtype=float),
            v=np.zeros(3),
            R=np.eye(3) if R is None else np.asarray(R, dtype=float),
            Omega=np.zeros(3),
        )

    def to_vector(self) -> NDArray[np.float64]:
        return np.concatenate([self.x, self.v, self.R.ravel(), self.Omega])

    @classmethod
    def from_vector(cls, y: NDArray[np.float64]) -> "QuadState":
        return cls(x=y[0:3].copy(), v=y[3:6].copy(), R=y[6:15].reshape(3, 3).copy(), Omega=y[15:18].copy())


def retract_quad_vector(y: NDArray[np.float64]) -> NDArray[np.float64]:
    """Re-orthonormalise the attitude block of a packed QuadState."""
    out = y.copy()
    out[6:15] = project_to_rotation(y[6:15].reshape(3, 3)).ravel()
    return out


@dataclass(frozen=True)
class WrenchCommand:
    """Total thrust f (N) and body moment M (N m)."""
    f: float
    M: Vec3


@dataclass(frozen=True)
class TrackingErrors:
    """Everything the tracking controller computed on the way to (f, M)."""
    e_x: Vec3
    e_v: Vec3
    e_R: Vec3
    e_Omega: Vec3
    psi: float
    R_d: Mat3


# =============================================================================
# Plant
# =============================================================================

def quad_derivatives(
    s: QuadState,
    u: WrenchCommand,
    p: QuadrotorParams,
) -> tuple[Vec3, Vec3, Mat3, Vec3]:
    """Time derivatives (x_dot, v_dot, R_dot, Omega_dot) of the rigid-body plant."""
    x_dot = s.v
    v_dot = p.gravity * E3 - (u.f / p.mass) * (s.R @ E3)
    r_dot = s.R @ hat(s.Omega)
    omega_dot = np.linalg.solve(p.J, np.asarray(u.M, dtype=float) - np.cross(s.Omega, p.J @ s.Omega))
    return x_dot, v_dot, r_dot, omega_dot


# =============================================================================
# Controller
# =============================================================================

def _desired_force(e_x: Vec3, e_v: Vec3, x_dd_d: Vec3, gains: Gains, p: QuadrotorParams) -> Vec3:
    # -k_x e_x - k_v e_v - m g e3 + m x_dd_d
    return (
        -gains.k_x * np.asarray(e_x, dtype=float)
        - gains.k_v * np.asarray(e_v, dtype=float)
        - p.mass * p.gravity * E3
        + p.mass * np.asarray(x_dd_d, dtype=float)
    )


def desired_attitude(
    e_x: ArrayLike,
    e_v: ArrayLike,
    x_dd_d: ArrayLike,
    b_1d: ArrayLike,
    gains: Gains,
    p: QuadrotorParams,
) -> Mat3:
    """
    R_d = [b_2d x b_3d, b_2d, b_3d] with b_3d along minus the desired force.

    Raises:
        ZeroThrustDirection: desired force norm <= EPS_THRUST
        DegenerateHeading: b_1d parallel to b_3d
    """
    force = _desired_force(e_x, e_v, x_dd_d, gains, p)
    norm = float(np.linalg.norm(force))
    if norm <= EPS_THRUST:
        raise ZeroThrustDirection(f"desired force vanished (|A| = {norm:.3e} N)")
    b3 = -force / norm

    cross = np.cross(b3, np.asarray(b_1d, dtype=float))
    cross_norm = float(np.linalg.norm(cross))
    if cross_norm <= EPS_ALIGN:
        raise DegenerateHeading(f"b_1d is parallel to b_3d (|b3 x b1d| = {cross_norm:.3e})")
    b2 = cross / cross_norm
    return np.column_stack([np.cross(b2, b3), b2, b3])


def thrust_command(
    e_x: ArrayLike,
    e_v: ArrayLike,
    x_dd_d: ArrayLike,
    R: Mat3,
    gains: Gains,
    p: QuadrotorParams,
) -> float:
    """f = -(-k_x e_x - k_v e_v - m g e3 + m x_dd_d) . R e3"""
    return -float(_desired_force(e_x, e_v, x_dd_d, gains, p) @ (R @ E3))


def moment_command(
    R: Mat3,
    R_d: Mat3,
    Omega: ArrayLike,
    Omega_d: ArrayLike,
    Omega_dot_d: ArrayLike,
    gains: Gains,
    p: QuadrotorParams,
) -> Vec3:
    """M = -k_R e_R - k_Omega e_Omega + Omega x J Omega - J(hat(Omega) R^T R_d Omega_d - R^T R_d Omega_dot_d)"""
    omega = np.asarray(Omega, dtype=float)
    rel = R.T @ R_d
    e_r = attitude_error_vec(R, R_d)
    e_omega = angular_velocity_error(R, R_d, omega, Omega_d)
    feedforward = hat(omega) @ rel @ np.asarray(Omega_d, dtype=float) - rel @ np.asarray(Omega_dot_d, dtype=float)
    return (
        -gains.k_r * e_r
        - gains.k_omega * e_omega
        + np.cross(omega, p.J @ omega)
        - p.J @ feedforward
    )


def track_step_detailed(
    s: QuadState,
    traj: DesiredTrajectory,
    t: float,
    gains: Gains,
    p: QuadrotorParams,
) -> tuple[WrenchCommand, TrackingErrors]:
    """Tracking errors -> R_d -> (f, M), keeping the intermediate errors."""
    ref = traj.sample(t)
    e_x = s.x - ref.x
    e_v = s.v - ref.v
    try:
        r_d = desired_attitude(e_x, e_v, ref.a, ref.b1, gains, p)
    except DegenerateHeading as exc:
        raise DegenerateHeading(str(exc), t=t) from exc

    f = thrust_command(e_x, e_v, ref.a, s.R, gains, p)
    m = moment_command(s.R, r_d, s.Omega, ref.omega, ref.omega_dot, gains, p)
    errors = TrackingErrors(
        e_x=e_x,
        e_v=e_v,
        e_R=attitude_error_vec(s.R, r_d),
        e_Omega=angular_velocity_error(s.R, r_d, s.Omega, ref.omega),
        psi=attitude_error_fn(s.R, r_d),
        R_d=r_d,
    )
    return WrenchCommand(f=f, M=m), errors


def track_step(
    s: QuadState,
    traj: DesiredTrajectory,
    t: float,
    gains: Gains,
    p: QuadrotorParams,
) -> WrenchCommand:
    """Geometric tracking controller evaluated at time t."""
    wrench, _ = track_step_detailed(s, traj, t, gains, p)
    return wrench


# =============================================================================
# Rotor mixing
# =============================================================================

def allocation_matrix(p: QuadrotorParams) -> NDArray[np.float64]:
    """Map rotor thrusts (f1..f4) to (f, M1, M2, M3)."""
    d, c = p.arm_length, p.torque_coeff
    return np.array([
        [1.0, 1.0, 1.0, 1.0],
        [0.0, -d, 0.0, d],
        [d, 0.0, -d, 0.0],
        [-c, c, -c, c],
    ])


def forward_allocation(thrusts: ArrayLike, p: QuadrotorParams) -> WrenchCommand:
    """Wrench produced by the given rotor thrusts."""
    out = allocation_matrix(p) @ np.asarray(thrusts, dtype=float)
    return WrenchCommand(f=float(out[0]), M=out[1:4])


def mix_thrusts(w: WrenchCommand, p: QuadrotorParams) -> NDArray[np.float64]:
    """
    Rotor thrusts (f1, f2, f3, f4) realising the wrench exactly.

    Raises:
        SingularMixer: if d <= 0 or c_tau_f <= 0
    """
    d, c = p.arm_length, p.torque_coeff
    if d <= 0 or c <= 0:
        raise SingularMixer(f"allocation matrix is singular for d={d}, c_tau_f={c}")
    f = w.f
    m1, m2, m3 = np.asarray(w.M, dtype=float)
    # closed-form inverse of allocation_matrix
    return np.array([
        0.25 * f + m2 / (2.0 * d) - m3 / (4.0 * c),
        0.25 * f - m1 / (2.0 * d) + m3 / (4.0 * c),
        0.25 * f - m2 / (2.0 * d) - m3 / (4.0 * c),
        0.25 * f + m1 / (2.0 * d) + m3 / (4.0 * c),
    ])


def saturate_thrusts(thrusts: ArrayLike, p: QuadrotorParams) -> tuple[NDArray[np.float64], bool]:
    """Clip every rotor to [0, T_max / 4]; the flag tells whether anything was clipped."""
    thrusts = np.asarray(thrusts, dtype=float)
    clipped = np.clip(thrusts, 0.0, p.max_thrust / 4.0)
    return clipped, bool(np.any(clipped != thrusts))
