"""Velocity obstacles for convex polygonal robots, plus a multi-robot simulator."""

from .config import ConfigError, ScenarioConfig, load_scenario
from .engine import RunResult, ScenarioError, run
from .geometry import ConvexPolygon, Pose
from .kernels import BACKEND
from .policy import Method, PolicyParams

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConfigError",
    "ConvexPolygon",
    "Method",
    "PolicyParams",
    "Pose",
    "RunResult",
    "ScenarioConfig",
    "ScenarioError",
    "load_scenario",
    "run",
]
