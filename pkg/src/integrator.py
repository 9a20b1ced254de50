"""
Fixed-step classical RK4 on flat state vectors with post-step retraction.

Rotations are integrated entrywise and then projected back onto SO(3);
link directions are renormalised and their angular velocities made
transverse again. The input policy (or controller) is evaluated at every
RK stage.

Usage:
    series = simulate(hover_state(params), ConstantInputPolicy(params), params, IntegratorConfig())
"""

import logging
from typing import Callable, Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from src.data_models import Gains, IntegratorConfig, QuadrotorParams
from src.errors import Diverged
from src.quadrotor import (
    QuadState,
    WrenchCommand,
    forward_allocation,
    mix_thrusts,
    quad_derivatives,
    retract_quad_vector,
    saturate_thrusts,
    track_step,
    track_step_detailed,
)
from src.swarm.dynamics import swarm_derivatives
from src.swarm.policies import InputPolicy
from src.swarm.state import SwarmParams, SwarmState
from src.timeseries import TRACK_COLUMNS, TimeSeries
from src.trajectory import DesiredTrajectory


logger = logging.getLogger(__name__)

DIVERGENCE_LIMIT = 1e6
DEBUG_EVERY = 1000

DerivFn = Callable[[float, NDArray[np.float64]], NDArray[np.float64]]
Retraction = Callable[[NDArray[np.float64]], NDArray[np.float64]]


# =============================================================================
# Stepping
# =============================================================================

def rk4_step(
    y: NDArray[np.float64],
    deriv_fn: DerivFn,
    dt: float,
    t: float = 0.0,
    retract: Optional[Retraction] = None,
) -> NDArray[np.float64]:
    """One classical Runge-Kutta step of size dt from (t, y)."""
    k1 = deriv_fn(t, y)
    k2 = deriv_fn(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = deriv_fn(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = deriv_fn(t + dt, y + dt * k3)
    y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y_next if retract is None else retract(y_next)


def _check_finite(y: NDArray[np.float64], t: float) -> None:
    if not np.all(np.isfinite(y)):
        raise Diverged(f"state became non-finite at t = {t:.6g} s", t=t)
    peak = float(np.max(np.abs(y)))
    if peak > DIVERGENCE_LIMIT:
        raise Diverged(f"state magnitude {peak:.3e} exceeds {DIVERGENCE_LIMIT:.0e} at t = {t:.6g} s", t=t)


# =============================================================================
# Swarm simulation
# =============================================================================

def simulate(
    initial: SwarmState,
    policy: InputPolicy,
    params: SwarmParams,
    cfg: IntegratorConfig,
) -> TimeSeries:
    """
    Integrate the coupled swarm model from `initial` for cfg.t_final seconds.

    Raises:
        Diverged: if the state turns non-finite or any entry exceeds 1e6
        SingularMassMatrix: propagated from the payload solve
    """
    n = params.n
    if initial.n != n:
        raise ValueError(f"initial state has {initial.n} links but params describe {n}")
    violated = initial.check_invariants()
    if violated is not None:
        raise ValueError(f"initial state violates the {violated} invariant")

    def deriv_fn(t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        s = SwarmState.from_vector(y, n)
        return swarm_derivatives(s, policy(t, s), params).to_vector()

    def retract(y: NDArray[np.float64]) -> NDArray[np.float64]:
        return SwarmState.from_vector(y, n).retract().to_vector()

    n_steps = cfg.n_steps
    times = cfg.dt * np.arange(n_steps + 1)
    states = np.empty((n_steps + 1, SwarmState.vector_size(n)))
    thrusts = np.empty((n_steps + 1, n))
    moments = np.empty((n_steps + 1, n, 3))

    logger.info(f"Simulating n={n} swarm with '{policy.name}' inputs: {n_steps} steps of {cfg.dt:g} s")
    y = initial.to_vector()
    for k in range(n_steps + 1):
        t = float(times[k])
        u = policy(t, SwarmState.from_vector(y, n))
        states[k] = y
        thrusts[k] = u.f
        moments[k] = u.M
        if k % DEBUG_EVERY == 0:
            logger.debug(f"t = {t:.3f} s: x0 = {np.round(y[0:3], 9).tolist()}, f = {np.round(u.f, 6).tolist()}")
        if k == n_steps:
            break
        step_retract = retract if (k + 1) % cfg.retraction_every == 0 else None
        y = rk4_step(y, deriv_fn, cfg.dt, t=t, retract=step_retract)
        _check_finite(y, float(times[k + 1]))

    logger.info(f"Simulation finished at t = {times[-1]:g} s")
    return TimeSeries(t=times, states=states, n=n, thrusts=thrusts, moments=moments)


# =============================================================================
# Single-quadrotor tracking
# =============================================================================

def _apply_limits(wrench: WrenchCommand, p: QuadrotorParams, saturate: bool):
    """Rotor thrusts for a wrench and the wrench they actually produce."""
    rotors = mix_thrusts(wrench, p)
    if not saturate:
        return rotors, wrench, False
    clipped, hit = saturate_thrusts(rotors, p)
    return clipped, forward_allocation(clipped, p), hit


def simulate_tracking(
    initial: QuadState,
    traj: DesiredTrajectory,
    gains: Gains,
    params: QuadrotorParams,
    cfg: IntegratorConfig,
    saturate: bool = False,
) -> pd.DataFrame:
    """
    Closed-loop run of one quadrotor under the geometric tracking controller.

    Returns one row per step with the tracking errors, the commanded wrench
    and the rotor thrusts (after clipping when `saturate` is set).

    Raises:
        DegenerateHeading: with the offending time in `.t`
        Diverged: if the state leaves the admissible range
    """
    def deriv_fn(t: float, y: NDArray[np.float64]) -> NDArray[np.float64]:
        s = QuadState.from_vector(y)
        wrench = track_step(s, traj, t, gains, params)
        _, applied, _ = _apply_limits(wrench, params, saturate)
        x_dot, v_dot, r_dot, omega_dot = quad_derivatives(s, applied, params)
        return np.concatenate([x_dot, v_dot, r_dot.ravel(), omega_dot])

    n_steps = cfg.n_steps
    rows = []
    saturated_samples = 0
    y = initial.to_vector()
    logger.info(f"Tracking run: {n_steps} steps of {cfg.dt:g} s, saturation {'on' if saturate else 'off'}")
    for k in range(n_steps + 1):
        t = cfg.dt * k
        s = QuadState.from_vector(y)
        wrench, errors = track_step_detailed(s, traj, t, gains, params)
        rotors, _, hit = _apply_limits(wrench, params, saturate)
        if hit:
            saturated_samples += 1
            logger.warning(f"Rotor thrust saturated at t = {t:.4f} s: {np.round(rotors, 4).tolist()}")
        rows.append(np.concatenate([
            [t], errors.e_x, errors.e_v, [errors.psi], errors.e_R, errors.e_Omega,
            [wrench.f], wrench.M, rotors,
        ]))
        if k == n_steps:
            break
        y = rk4_step(y, deriv_fn, cfg.dt, t=t, retract=retract_quad_vector)
        _check_finite(y, cfg.dt * (k + 1))

    if saturated_samples:
        logger.warning(f"{saturated_samples} of {n_steps + 1} samples hit the rotor limits")
    return pd.DataFrame(np.array(rows), columns=TRACK_COLUMNS)
