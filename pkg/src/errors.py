"""
Exception types raised by the swarm-sling library.

Every error derives from SwarmSlingError so the CLI and the API can
catch the whole family in one place.
"""


class SwarmSlingError(Exception):
    """Base class for all library errors."""


# =============================================================================
# Geometry
# =============================================================================

class NonSkewInput(SwarmSlingError, ValueError):
    """vee() received a matrix that is not skew-symmetric."""


class DegenerateMatrix(SwarmSlingError, ValueError):
    """A matrix cannot be projected onto SO(3) (det <= 0)."""


# =============================================================================
# Quadrotor control
# =============================================================================

class ZeroThrustDirection(SwarmSlingError, ValueError):
    """The desired force vector vanished, so b_3d is undefined."""


class DegenerateHeading(SwarmSlingError, ValueError):
    """b_1d is parallel to b_3d, so b_2d is undefined."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class SingularMixer(SwarmSlingError, ValueError):
    """The 4-rotor allocation matrix is not invertible."""


# =============================================================================
# Swarm dynamics / integration
# =============================================================================

class SingularMassMatrix(SwarmSlingError, ArithmeticError):
    """The coupled payload system is too ill-conditioned to solve."""


class Diverged(SwarmSlingError, ArithmeticError):
    """A simulated state left the admissible range."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


# =============================================================================
# Planning / IO
# =============================================================================

class BadCount(SwarmSlingError, ValueError):
    """A fleet size outside the supported range."""


class ScenarioError(SwarmSlingError, ValueError):
    """A scenario file is malformed or inconsistent."""


class SchemaError(SwarmSlingError, ValueError):
    """A CSV file does not follow the expected column schema."""


class ConfigError(SwarmSlingError, ValueError):
    """An environment setting cannot be parsed."""
