"""
Input policies for open-loop swarm simulation.

A policy maps (t, state) to a SwarmInput. No policy here steers the
payload; they either hold the hover thrust or, additionally, keep every
quadrotor level with the attitude part of the tracking controller.
"""

from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np

from src.data_models import Gains
from src.quadrotor import moment_command
from src.swarm.dynamics import hover_inputs
from src.swarm.state import SwarmInput, SwarmParams, SwarmState


class InputPolicy(ABC):
    """
    Base class for swarm input policies.

    Usage:
        policy = ConstantInputPolicy(params)
        u = policy(t, state)
    """

    name: str = "base"

    @abstractmethod
    def __call__(self, t: float, state: SwarmState) -> SwarmInput:
        pass


class ConstantInputPolicy(InputPolicy):
    """Hover thrust M_t g / n on every vehicle, optionally scaled per vehicle."""

    name = "constant"

    def __init__(self, params: SwarmParams, thrust_scale: Optional[Sequence[float]] = None):
        base = hover_inputs(params)
        scale = np.ones(params.n) if thrust_scale is None else np.asarray(thrust_scale, dtype=float)
        if scale.shape != (params.n,):
            raise ValueError(f"thrust_scale needs {params.n} entries, got {scale.shape}")
        self._input = SwarmInput(f=base.f * scale, M=base.M)

    def __call__(self, t: float, state: SwarmState) -> SwarmInput:
        return self._input


class AttitudeHoldPolicy(InputPolicy):
    """
    Hover thrust plus the attitude controller driving each R_i to identity.

    Only k_R and k_Omega of `gains` are used.
    """

    name = "attitude_hold"

    def __init__(
        self,
        params: SwarmParams,
        gains: Optional[Gains] = None,
        thrust_scale: Optional[Sequence[float]] = None,
    ):
        self.params = params
        self.gains = gains or Gains.default_for(params.quads[0])
        self._thrust = ConstantInputPolicy(params, thrust_scale)

    def __call__(self, t: float, state: SwarmState) -> SwarmInput:
        base = self._thrust(t, state)
        zero = np.zeros(3)
        eye = np.eye(3)
        moments = np.array([
            moment_command(state.R[i], eye, state.Omega[i], zero, zero, self.gains, quad)
            for i, quad in enumerate(self.params.quads)
        ])
        return SwarmInput(f=base.f, M=moments)


def build_policy(
    name: str,
    params: SwarmParams,
    gains: Optional[Gains] = None,
    thrust_scale: Optional[Sequence[float]] = None,
) -> InputPolicy:
    """Look up a policy by name ("constant" or "attitude_hold")."""
    if name == ConstantInputPolicy.name:
        return ConstantInputPolicy(params, thrust_scale)
    if name == AttitudeHoldPolicy.name:
        return AttitudeHoldPolicy(params, gains, thrust_scale)
    raise ValueError(f"unknown input policy '{name}', expected 'constant' or 'attitude_hold'")
