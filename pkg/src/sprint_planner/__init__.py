"""Sample-efficient probability-informed tree planner, RRT baselines, and a
benchmark harness over synthetic n-dimensional configuration spaces."""

from .geometry import Region, as_config, dist, hvs, polyline_length, proj, proj_scalar
from .global_planner import PlanResult, PlanStatus, SprintParams, SprintVariant, plan
from .local_planner import LocalResult, LocalStatus, local_search
from .params import BaselineParams
from .world import Box, CollisionOracle, Scene, Sphere, load_scene, save_scene

__all__ = [
    "Region", "as_config", "dist", "hvs", "polyline_length", "proj", "proj_scalar",
    "PlanResult", "PlanStatus", "SprintParams", "SprintVariant", "plan",
    "LocalResult", "LocalStatus", "local_search",
    "BaselineParams",
    "Box", "CollisionOracle", "Scene", "Sphere", "load_scene", "save_scene",
]
