"""swarm-sling: payload transport by a quadrotor swarm on rigid links."""

__version__ = "0.1.0"
