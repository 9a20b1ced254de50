"""
Coordinate-free primitives on SO(3) and S^2.

Provides:
1. hat / vee maps between R^3 and so(3)
2. Attitude error function Psi, attitude error vector e_R and
   angular-velocity error e_Omega
3. Manifold hygiene: polar projection onto SO(3), Rodrigues exponential,
   unit-sphere normalisation

Rotations are stored as full 3x3 numpy arrays. All functions are pure.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import polar

from src.errors import DegenerateMatrix, NonSkewInput


Vec3 = NDArray[np.float64]
Mat3 = NDArray[np.float64]

# Invariant-check tolerance (Frobenius) and round-trip tolerance
TAU_ORTH = 1e-9
TAU_ROUND_TRIP = 1e-12

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


# =============================================================================
# hat / vee
# =============================================================================

def hat(v: ArrayLike) -> Mat3:
    """Skew-symmetric matrix with hat(v) @ b == cross(v, b)."""
    x, y, z = np.asarray(v, dtype=float)
    return np.array([
        [0.0, -z, y],
        [z, 0.0, -x],
        [-y, x, 0.0],
    ])


def hat_batch(v: NDArray[np.float64]) -> NDArray[np.float64]:
    """hat() applied row-wise to an (n, 3) array, returning (n, 3, 3)."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def vee(m: ArrayLike, tol: float = TAU_ORTH) -> Vec3:
    """
    Inverse of hat().

    Raises:
        NonSkewInput: if ||M + M^T||_F exceeds `tol`
    """
    m = np.asarray(m, dtype=float)
    asym = np.linalg.norm(m + m.T)
    if asym > tol:
        raise NonSkewInput(f"matrix is not skew-symmetric (||M + M^T|| = {asym:.3e})")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


# =============================================================================
# Elementary rotations
# =============================================================================

def rot_x(angle: float) -> Mat3:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> Mat3:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> Mat3:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def exp_so3(v: ArrayLike) -> Mat3:
    """Rodrigues formula: rotation by |v| about v/|v|."""
    v = np.asarray(v, dtype=float)
    theta = float(np.linalg.norm(v))
    if theta < 1e-12:
        # second-order series keeps exp(v) exp(-v) = I at round-off level
        k = hat(v)
        return np.eye(3) + k + 0.5 * (k @ k)
    k = hat(v / theta)
    return np.eye(3) + np.sin(theta) * k + (1.0 - np.cos(theta)) * (k @ k)


# =============================================================================
# Attitude errors
# =============================================================================

def attitude_error_fn(r: Mat3, r_d: Mat3) -> float:
    """Psi(R, R_d) = 1/2 tr(I - R_d^T R), in [0, 2]."""
    return 0.5 * float(np.trace(np.eye(3) - r_d.T @ r))


def attitude_error_vec(r: Mat3, r_d: Mat3) -> Vec3:
    """e_R = 1/2 (R_d^T R - R^T R_d)^vee."""
    # the argument is skew by construction; skip the tolerance check
    return 0.5 * vee(r_d.T @ r - r.T @ r_d, tol=np.inf)


def angular_velocity_error(
    r: Mat3,
    r_d: Mat3,
    omega: ArrayLike,
    omega_d: ArrayLike,
) -> Vec3:
    """e_Omega = Omega - R^T R_d Omega_d."""
    return np.asarray(omega, dtype=float) - r.T @ r_d @ np.asarray(omega_d, dtype=float)


# =============================================================================
# Manifold hygiene
# =============================================================================

def project_to_rotation(m: ArrayLike) -> Mat3:
    """
    Closest rotation in Frobenius norm (orthogonal polar factor).

    Raises:
        DegenerateMatrix: if det(M) <= 1e-12
    """
    m = np.asarray(m, dtype=float)
    det = float(np.linalg.det(m))
    if det <= 1e-12:
        raise DegenerateMatrix(f"cannot project matrix with det = {det:.3e} onto SO(3)")
    u, _ = polar(m)
    return u


def normalize(v: ArrayLike) -> Vec3:
    """Project a non-zero vector onto the unit sphere."""
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def orthonormality_defect(r: ArrayLike) -> float:
    """||R^T R - I||_F."""
    r = np.asarray(r, dtype=float)
    return float(np.linalg.norm(r.T @ r - np.eye(3)))


def is_rotation(r: ArrayLike, tol: float = TAU_ORTH) -> bool:
    """True when R is orthonormal with det +1 within `tol`."""
    r = np.asarray(r, dtype=float)
    return orthonormality_defect(r) <= tol and abs(np.linalg.det(r) - 1.0) <= tol
