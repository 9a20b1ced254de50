"""Payload + links + quadrotors model: state, equations of motion, input policies."""

from src.swarm.dynamics import (
    cable_tensions,
    control_decompose,
    hover_inputs,
    hover_state,
    link_accel,
    payload_accel,
    payload_residual,
    quad_attitude_accel,
    reconstruct_quads,
    swarm_derivatives,
    validate_links,
)
from src.swarm.policies import AttitudeHoldPolicy, ConstantInputPolicy, InputPolicy, build_policy
from src.swarm.state import LinkState, SwarmInput, SwarmParams, SwarmState, SwarmStateDerivative

__all__ = [
    "AttitudeHoldPolicy",
    "ConstantInputPolicy",
    "InputPolicy",
    "LinkState",
    "SwarmInput",
    "SwarmParams",
    "SwarmState",
    "SwarmStateDerivative",
    "build_policy",
    "cable_tensions",
    "control_decompose",
    "hover_inputs",
    "hover_state",
    "link_accel",
    "payload_accel",
    "payload_residual",
    "quad_attitude_accel",
    "reconstruct_quads",
    "swarm_derivatives",
    "validate_links",
]
