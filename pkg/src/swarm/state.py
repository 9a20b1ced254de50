"""
State definitions for the payload + n links + n quadrotors system.

The configuration manifold is R^3 x SO(3) for the payload, (S^2)^n for the
links and SO(3)^n for the quadrotor attitudes. Quadrotor positions are not
stored; they follow from the payload pose and the link directions (see
dynamics.reconstruct_quads).

Everything here is an immutable value; the integrator works on the packed
vector form (to_vector / from_vector) and calls retract() after a step.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.linalg import polar

from src.data_models import LinkSpec, PayloadParams, QuadrotorParams
from src.geometry import E3, TAU_ORTH, Mat3, Vec3


# =============================================================================
# Parameters
# =============================================================================

class SwarmParams(BaseModel):
    """Payload, per-quadrotor parameters and the links joining them."""
    model_config = ConfigDict(frozen=True)

    payload: PayloadParams
    quads: list[QuadrotorParams]
    links: list[LinkSpec]

    @model_validator(mode="after")
    def _consistent(self) -> "SwarmParams":
        if len(self.quads) < 1:
            raise ValueError("a swarm needs at least one quadrotor")
        if len(self.quads) != len(self.links):
            raise ValueError(f"{len(self.quads)} quadrotors but {len(self.links)} links")
        gravities = {q.gravity for q in self.quads}
        if len(gravities) != 1:
            raise ValueError(f"quadrotors disagree on gravity: {sorted(gravities)}")
        return self

    @property
    def n(self) -> int:
        return len(self.quads)

    @property
    def gravity(self) -> float:
        return self.quads[0].gravity

    @cached_property
    def masses(self) -> NDArray[np.float64]:
        return np.array([q.mass for q in self.quads])

    @cached_property
    def lengths(self) -> NDArray[np.float64]:
        return np.array([link.length for link in self.links])

    @cached_property
    def rho(self) -> NDArray[np.float64]:
        return np.array([link.rho for link in self.links], dtype=float)

    @cached_property
    def inertias(self) -> NDArray[np.float64]:
        return np.array([q.J for q in self.quads])

    @property
    def total_mass(self) -> float:
        """M_t = m_0 + sum m_i."""
        return self.payload.mass + float(self.masses.sum())


# =============================================================================
# State
# =============================================================================

@dataclass(frozen=True)
class LinkState:
    """Direction q (quadrotor -> attachment, inertial) and angular velocity omega."""
    q: Vec3
    omega: Vec3


@dataclass(frozen=True)
class SwarmState:
    """
    Full state of the coupled system.

    Arrays are indexed by quadrotor/link along the first axis:
    q, omega, Omega are (n, 3); R is (n, 3, 3).
    """
    x0: Vec3
    v0: Vec3
    R0: Mat3
    Omega0: Vec3
    q: NDArray[np.float64]
    omega: NDArray[np.float64]
    R: NDArray[np.float64]
    Omega: NDArray[np.float64]

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def links(self) -> list[LinkState]:
        return [LinkState(q=self.q[i], omega=self.omega[i]) for i in range(self.n)]

    @staticmethod
    def vector_size(n: int) -> int:
        return 18 + 18 * n

    def to_vector(self) -> NDArray[np.float64]:
        return np.concatenate([
            self.x0, self.v0, self.R0.ravel(), self.Omega0,
            self.q.ravel(), self.omega.ravel(), self.R.ravel(), self.Omega.ravel(),
        ])

    @classmethod
    def from_vector(cls, y: NDArray[np.float64], n: int) -> "SwarmState":
        if y.shape != (cls.vector_size(n),):
            raise ValueError(f"expected a vector of {cls.vector_size(n)} entries for n={n}, got {y.shape}")
        k = 18
        q = y[k:k + 3 * n].reshape(n, 3)
        k += 3 * n
        omega = y[k:k + 3 * n].reshape(n, 3)
        k += 3 * n
        rot = y[k:k + 9 * n].reshape(n, 3, 3)
        k += 9 * n
        return cls(
            x0=y[0:3].copy(),
            v0=y[3:6].copy(),
            R0=y[6:15].reshape(3, 3).copy(),
            Omega0=y[15:18].copy(),
            q=q.copy(),
            omega=omega.copy(),
            R=rot.copy(),
            Omega=y[k:k + 3 * n].reshape(n, 3).copy(),
        )

    def retract(self) -> "SwarmState":
        """Project back onto the manifold: polar factor for rotations, unit q, omega transverse to q."""
        q = self.q / np.linalg.norm(self.q, axis=1, keepdims=True)
        omega = self.omega - np.sum(q * self.omega, axis=1, keepdims=True) * q
        return SwarmState(
            x0=self.x0,
            v0=self.v0,
            R0=polar(self.R0)[0],
            Omega0=self.Omega0,
            q=q,
            omega=omega,
            R=np.array([polar(r)[0] for r in self.R]),
            Omega=self.Omega,
        )

    def invariant_defects(self) -> dict[str, float]:
        """Worst violation of each manifold invariant."""
        rotations = np.concatenate([self.R0[None], self.R])
        gram = np.einsum("nji,njk->nik", rotations, rotations) - np.eye(3)
        return {
            "orthonormality": float(np.max(np.linalg.norm(gram, axis=(1, 2)))),
            "determinant": float(np.max(np.abs(np.linalg.det(rotations) - 1.0))),
            "link_norm": float(np.max(np.abs(np.linalg.norm(self.q, axis=1) - 1.0))),
            "transversality": float(np.max(np.abs(np.sum(self.q * self.omega, axis=1)))),
        }

    def check_invariants(self, tol: float = TAU_ORTH) -> Optional[str]:
        """Name of the first violated invariant, or None."""
        for name, value in self.invariant_defects().items():
            if value > tol:
                return name
        return None

    @classmethod
    def at_rest(cls, n: int, x0: ArrayLike = (0.0, 0.0, 0.0)) -> "SwarmState":
        """Links vertical (quadrotors above their attachments), every attitude identity, zero velocities."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        return cls(
            x0=np.asarray(x0, dtype=float),
            v0=np.zeros(3),
            R0=np.eye(3),
            Omega0=np.zeros(3),
            q=np.tile(E3, (n, 1)),
            omega=np.zeros((n, 3)),
            R=np.tile(np.eye(3), (n, 1, 1)),
            Omega=np.zeros((n, 3)),
        )


# =============================================================================
# Inputs and derivatives
# =============================================================================

@dataclass(frozen=True)
class SwarmInput:
    """Per-quadrotor total thrust f (n,) and body moment M (n, 3)."""
    f: NDArray[np.float64]
    M: NDArray[np.float64]

    def forces(self, state: SwarmState) -> NDArray[np.float64]:
        """u_i = -f_i R_i e3, shape (n, 3)."""
        return -self.f[:, None] * state.R[:, :, 2]


@dataclass(frozen=True)
class SwarmStateDerivative:
    """Time derivative of every stored state component."""
    x0_dot: Vec3
    v0_dot: Vec3
    R0_dot: Mat3
    Omega0_dot: Vec3
    q_dot: NDArray[np.float64]
    omega_dot: NDArray[np.float64]
    R_dot: NDArray[np.float64]
    Omega_dot: NDArray[np.float64]

    def to_vector(self) -> NDArray[np.float64]:
        return np.concatenate([
            self.x0_dot, self.v0_dot, self.R0_dot.ravel(), self.Omega0_dot,
            self.q_dot.ravel(), self.omega_dot.ravel(), self.R_dot.ravel(), self.Omega_dot.ravel(),
        ])

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_vector()))
