"""Numerics for regular shrinkers of curve shortening flow with two closed regions."""

__version__ = "0.1.0"

from .phase_plane import DomainError, Energy, PhasePoint, special_point  # noqa: E402
from .angles import delta_theta, flow_delta_theta, h_triple, period  # noqa: E402

__all__ = ["DomainError", "Energy", "PhasePoint", "special_point", "delta_theta", "flow_delta_theta",
           "h_triple", "period", "__version__"]
