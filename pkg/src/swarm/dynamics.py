"""
Coupled equations of motion of a rigid payload carried by n quadrotors on
massless rigid links.

Conventions (z-down, e3 along gravity):
- q_i is the unit vector from quadrotor i to its attachment point, so a
  hovering fleet has q_i = e3 and x_i = x_0 + R_0 rho_i - l_i q_i.
- u_i = -f_i R_i e3 is the thrust vector of quadrotor i, split into
  u_i^par = q_i q_i^T u_i and u_i^perp = u_i - u_i^par.

Payload translation and rotation are coupled through the links and are
solved together as one 6x6 linear system:

    M_q (a_0 - g e3) - sum m_i P_i R_0 hat(rho_i) Omega0_dot = sum r_i
    (J_0 - sum m_i hat(rho_i) R_0^T P_i R_0 hat(rho_i)) Omega0_dot
        + sum m_i hat(rho_i) R_0^T P_i (a_0 - g e3) + Omega0 x J_0 Omega0 = sum hat(rho_i) R_0^T r_i

with P_i = q_i q_i^T, M_q = m_0 I + sum m_i P_i and
r_i = u_i^par - m_i l_i |omega_i|^2 q_i - m_i P_i R_0 hat(Omega0)^2 rho_i.

The right-hand side of the rotational equation carries no extra m_i factor:
r_i already has force units, and the form above is the one obtained by
eliminating the cable tensions from the Newton-Euler equations of every
body. The tests check it against a point-mass pendulum and a
tension-multiplier formulation.
"""

import logging
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import solve

from src.data_models import LinkSpec, PayloadParams, QuadrotorParams
from src.errors import ScenarioError, SingularMassMatrix
from src.geometry import E3, Vec3, hat, hat_batch
from src.swarm.state import SwarmInput, SwarmParams, SwarmState, SwarmStateDerivative


logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12
FOOTPRINT_MARGIN = 0.10
FOOTPRINT_TOL = 1e-9


# =============================================================================
# Building blocks
# =============================================================================

def control_decompose(u: ArrayLike, q: ArrayLike) -> tuple[Vec3, Vec3]:
    """Split u into the component along the link and the component across it."""
    u = np.asarray(u, dtype=float)
    q = np.asarray(q, dtype=float)
    u_par = q * float(q @ u)
    return u_par, u - u_par


def _projectors(q: NDArray[np.float64]) -> NDArray[np.float64]:
    return q[:, :, None] * q[:, None, :]


def _link_forces(s: SwarmState, forces: NDArray[np.float64], params: SwarmParams):
    """Per-link P_i, u_i^par, u_i^perp and r_i."""
    m, length = params.masses, params.lengths
    proj = _projectors(s.q)
    u_par = np.einsum("nij,nj->ni", proj, forces)
    u_perp = forces - u_par

    w0 = hat(s.Omega0)
    centripetal = (s.R0 @ w0 @ w0 @ params.rho.T).T
    omega_sq = np.sum(s.omega**2, axis=1)
    r = (
        u_par
        - (m * length * omega_sq)[:, None] * s.q
        - m[:, None] * np.einsum("nij,nj->ni", proj, centripetal)
    )
    return proj, u_par, u_perp, r


def _attachment_accels(s: SwarmState, x0_dd: Vec3, omega0_dot: Vec3, params: SwarmParams) -> NDArray[np.float64]:
    """a_0 - g e3 - R_0 hat(rho_i) Omega0_dot + R_0 hat(Omega0)^2 rho_i for every link."""
    w0 = hat(s.Omega0)
    rho = params.rho
    # -R_0 hat(rho) Omega0_dot == R_0 (Omega0_dot x rho)
    return (
        (x0_dd - params.gravity * E3)[None, :]
        + (s.R0 @ np.cross(omega0_dot, rho).T).T
        + (s.R0 @ w0 @ w0 @ rho.T).T
    )


def _payload_system(s: SwarmState, forces: NDArray[np.float64], params: SwarmParams):
    """Assemble the 6x6 matrix and right-hand side of the payload equations."""
    m = params.masses
    g = params.gravity
    proj, _, u_perp, r = _link_forces(s, forces, params)
    rho_hat = hat_batch(params.rho)

    mass_q = params.payload.mass * np.eye(3) + np.einsum("n,nij->ij", m, proj)
    a12 = -np.einsum("n,nij,jk,nkl->il", m, proj, s.R0, rho_hat)
    a21 = np.einsum("n,nij,kj,nkl->il", m, rho_hat, s.R0, proj)
    a22 = params.payload.J - np.einsum(
        "n,nij,kj,nkl,lm,nmp->ip", m, rho_hat, s.R0, proj, s.R0, rho_hat
    )

    matrix = np.block([[mass_q, a12], [a21, a22]])
    trans_rhs = r.sum(axis=0) + g * (mass_q @ E3)
    rot_rhs = (
        np.einsum("nij,kj,nk->i", rho_hat, s.R0, r)
        + g * (a21 @ E3)
        - np.cross(s.Omega0, params.payload.J @ s.Omega0)
    )
    return matrix, np.concatenate([trans_rhs, rot_rhs]), u_perp


# =============================================================================
# Payload
# =============================================================================

def payload_accel(s: SwarmState, u: SwarmInput, params: SwarmParams) -> tuple[Vec3, Vec3]:
    """
    Payload translational acceleration and body angular acceleration.

    Raises:
        SingularMassMatrix: if the 6x6 system's condition number exceeds 1e12
    """
    matrix, rhs, _ = _payload_system(s, u.forces(s), params)
    accel = _solve_payload(matrix, rhs)
    return accel[:3], accel[3:]


def _solve_payload(matrix: NDArray[np.float64], rhs: NDArray[np.float64]) -> NDArray[np.float64]:
    condition = float(np.linalg.cond(matrix))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise SingularMassMatrix(f"payload system is ill-conditioned (cond = {condition:.3e})")
    return solve(matrix, rhs)


def payload_residual(
    s: SwarmState,
    u: SwarmInput,
    params: SwarmParams,
    x0_dd: ArrayLike,
    omega0_dot: ArrayLike,
) -> tuple[Vec3, Vec3]:
    """Residual of the translational and rotational payload equations for the given accelerations."""
    matrix, rhs, _ = _payload_system(s, u.forces(s), params)
    out = matrix @ np.concatenate([np.asarray(x0_dd, dtype=float), np.asarray(omega0_dot, dtype=float)]) - rhs
    return out[:3], out[3:]


# =============================================================================
# Links and quadrotors
# =============================================================================

def link_accel(
    i: int,
    s: SwarmState,
    x0_dd: ArrayLike,
    omega0_dot: ArrayLike,
    u_perp: ArrayLike,
    quad: QuadrotorParams,
    link: LinkSpec,
) -> Vec3:
    """omega_i_dot = (1/l) hat(q)(a_0 - g e3 - R_0 hat(rho) Omega0_dot + R_0 hat(Omega0)^2 rho) - hat(q) u_perp / (m l)"""
    q = s.q[i]
    rho = np.asarray(link.rho, dtype=float)
    w0 = hat(s.Omega0)
    attach_accel = (
        np.asarray(x0_dd, dtype=float)
        - quad.gravity * E3
        - s.R0 @ hat(rho) @ np.asarray(omega0_dot, dtype=float)
        + s.R0 @ w0 @ w0 @ rho
    )
    return (
        np.cross(q, attach_accel) / link.length
        - np.cross(q, np.asarray(u_perp, dtype=float)) / (quad.mass * link.length)
    )


def _link_accels(
    s: SwarmState,
    x0_dd: Vec3,
    omega0_dot: Vec3,
    u_perp: NDArray[np.float64],
    params: SwarmParams,
) -> NDArray[np.float64]:
    """link_accel for every link at once."""
    attach_accel = _attachment_accels(s, x0_dd, omega0_dot, params)
    length = params.lengths[:, None]
    return (
        np.cross(s.q, attach_accel) / length
        - np.cross(s.q, u_perp) / (params.masses[:, None] * length)
    )


def quad_attitude_accel(i: int, s: SwarmState, moment: ArrayLike, quad: QuadrotorParams) -> Vec3:
    """Omega_i_dot = J_i^-1 (M_i - Omega_i x J_i Omega_i)"""
    omega = s.Omega[i]
    return np.linalg.solve(quad.J, np.asarray(moment, dtype=float) - np.cross(omega, quad.J @ omega))


# =============================================================================
# Full derivative
# =============================================================================

def swarm_derivatives(s: SwarmState, u: SwarmInput, params: SwarmParams) -> SwarmStateDerivative:
    """Time derivative of every stored state component."""
    matrix, rhs, u_perp = _payload_system(s, u.forces(s), params)
    accel = _solve_payload(matrix, rhs)
    x0_dd, omega0_dot = accel[:3], accel[3:]

    inertias = params.inertias
    gyro = np.cross(s.Omega, np.einsum("nij,nj->ni", inertias, s.Omega))
    quad_omega_dot = np.linalg.solve(inertias, (u.M - gyro)[..., None])[..., 0]

    return SwarmStateDerivative(
        x0_dot=s.v0.copy(),
        v0_dot=x0_dd,
        R0_dot=s.R0 @ hat(s.Omega0),
        Omega0_dot=omega0_dot,
        q_dot=np.cross(s.omega, s.q),
        omega_dot=_link_accels(s, x0_dd, omega0_dot, u_perp, params),
        R_dot=s.R @ hat_batch(s.Omega),
        Omega_dot=quad_omega_dot,
    )


def reconstruct_quads(
    s: SwarmState,
    params: SwarmParams,
    derivs: Optional[SwarmStateDerivative] = None,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Quadrotor positions and velocities, shape (n, 3) each.

    x_i = x_0 + R_0 rho_i - l_i q_i
    x_i_dot = x_0_dot + R_0_dot rho_i - l_i q_i_dot

    The rates are kinematic, so `derivs` is optional; when given, its
    R0_dot and q_dot are used.
    """
    rho, length = params.rho, params.lengths[:, None]
    r0_dot = s.R0 @ hat(s.Omega0) if derivs is None else derivs.R0_dot
    q_dot = np.cross(s.omega, s.q) if derivs is None else derivs.q_dot
    positions = s.x0 + (s.R0 @ rho.T).T - length * s.q
    velocities = s.v0 + (r0_dot @ rho.T).T - length * q_dot
    return positions, velocities


def cable_tensions(s: SwarmState, u: SwarmInput, params: SwarmParams) -> NDArray[np.float64]:
    """
    Tension in every link (N); positive means the cable pulls.

    Cables are modelled as rigid, so a negative value is still simulated;
    it marks an instant where a real cable would go slack.
    """
    forces = u.forces(s)
    x0_dd, omega0_dot = payload_accel(s, u, params)
    attach_accel = _attachment_accels(s, x0_dd, omega0_dot, params)
    m, length = params.masses, params.lengths
    return (
        m * np.sum(s.q * attach_accel, axis=1)
        + m * length * np.sum(s.omega**2, axis=1)
        - np.sum(s.q * forces, axis=1)
    )


# =============================================================================
# Equilibrium helpers
# =============================================================================

def hover_inputs(params: SwarmParams, n: Optional[int] = None) -> SwarmInput:
    """Equal thrust M_t g / n on every vehicle, zero moments."""
    n = params.n if n is None else n
    thrust = params.total_mass * params.gravity / n
    return SwarmInput(f=np.full(n, thrust), M=np.zeros((n, 3)))


def hover_state(params: SwarmParams, x0: ArrayLike = (0.0, 0.0, 0.0)) -> SwarmState:
    """Initial hover state: links vertical, attitudes identity, at rest."""
    return SwarmState.at_rest(params.n, x0)


def validate_links(payload: PayloadParams, links: list[LinkSpec]) -> None:
    """
    Check every attachment lies in the payload box expanded by 10%.

    Raises:
        ScenarioError: for points beyond the expanded box
    """
    half = 0.5 * np.asarray(payload.dims, dtype=float)
    for i, link in enumerate(links, start=1):
        rho = np.abs(np.asarray(link.rho, dtype=float))
        if np.any(rho > half * (1.0 + FOOTPRINT_MARGIN) + FOOTPRINT_TOL):
            raise ScenarioError(f"attachment {i} at {list(link.rho)} is outside the payload box {payload.dims}")
        if np.any(rho > half + FOOTPRINT_TOL):
            logger.warning(f"Attachment {i} at {list(link.rho)} lies outside the payload footprint")
