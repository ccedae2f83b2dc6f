"""Scenes, obstacles, and the instrumented collision oracle.

The oracle is the single accounting point for collision-check samples: every
feasibility query, including rejection-sampling attempts, bumps its counter
by exactly one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import Config, as_config


class FreeSpaceNotFound(RuntimeError):
    """Rejection sampling exhausted its attempt budget without a free point."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned hyper-box obstacle; the boundary counts as in collision."""

    min: Config
    max: Config

    def __post_init__(self):
        if self.min.shape != self.max.shape:
            raise ValueError("box min/max dimension mismatch")
        if np.any(self.min > self.max):
            raise ValueError("box min exceeds max")

    @property
    def dim(self) -> int:
        return self.min.shape[0]

    def contains(self, q: Config) -> bool:
        return bool(np.all(q >= self.min) and np.all(q <= self.max))


@dataclass(frozen=True)
class Sphere:
    """Hyper-sphere obstacle; the boundary counts as in collision."""

    center: Config
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("sphere radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def contains(self, q: Config) -> bool:
        return bool(np.dot(q - self.center, q - self.center) <= self.radius * self.radius)


Obstacle = Box | Sphere


@dataclass(frozen=True)
class Scene:
    """Bounded d-dimensional world with a list of obstacles."""

    name: str
    lower: Config
    upper: Config
    obstacles: tuple[Obstacle, ...] = ()

    def __post_init__(self):
        if self.lower.shape != self.upper.shape:
            raise ValueError("scene lower/upper dimension mismatch")
        if not np.all(self.lower < self.upper):
            raise ValueError("scene requires lower[i] < upper[i] for every i")
        for i, obs in enumerate(self.obstacles):
            if obs.dim != self.dim:
                raise ValueError(f"obstacles[{i}]: dimension {obs.dim} != scene dimension {self.dim}")

    @property
    def dim(self) -> int:
        return self.lower.shape[0]


class CollisionOracle:
    """Feasibility oracle over a scene.

    Counts every is_free call.  With record_samples=True it also keeps the
    full (config, free) query log, which the benchmark harness needs for the
    delta-usefulness metric.
    """

    def __init__(self, scene: Scene, record_samples: bool = False):
        self.scene = scene
        self.sample_count = 0
        self.record_samples = record_samples
        self.samples: list[tuple[Config, bool]] = []
        # stacked obstacle arrays so one query touches numpy a fixed number
        # of times regardless of obstacle count
        boxes = [o for o in scene.obstacles if isinstance(o, Box)]
        spheres = [o for o in scene.obstacles if isinstance(o, Sphere)]
        self._lo = scene.lower.tolist()
        self._hi = scene.upper.tolist()
        self._boxes = [(b.min.tolist(), b.max.tolist()) for b in boxes]
        self._spheres = [(s.center.tolist(), s.radius * s.radius) for s in spheres]

    def is_free(self, q: Config) -> bool:
        if q.shape[0] != self.scene.dim:
            raise ValueError(f"query dimension {q.shape[0]} != scene dimension {self.scene.dim}")
        self.sample_count += 1
        ql = q.tolist()
        free = all(l <= x <= h for x, l, h in zip(ql, self._lo, self._hi))
        if free:
            for mn, mx in self._boxes:
                if all(l <= x <= h for x, l, h in zip(ql, mn, mx)):
                    free = False
                    break
        if free:
            for center, r2 in self._spheres:
                if sum((x - c) * (x - c) for x, c in zip(ql, center)) <= r2:
                    free = False
                    break
        if self.record_samples:
            self.samples.append((q.copy(), free))
        return free

    def sample_free(self, rng: np.random.Generator, max_attempts: int = 100_000) -> Config:
        """Uniform draw from free space by rejection; every attempt is metered."""
        lo, hi = self.scene.lower, self.scene.upper
        for _ in range(max_attempts):
            q = rng.uniform(lo, hi)
            if self.is_free(q):
                return q
        raise FreeSpaceNotFound(f"no free sample found in {max_attempts} attempts")


def _obstacle_to_dict(obs: Obstacle) -> dict:
    if isinstance(obs, Box):
        return {"type": "box", "min": obs.min.tolist(), "max": obs.max.tolist()}
    return {"type": "sphere", "center": obs.center.tolist(), "radius": obs.radius}


def scene_to_dict(scene: Scene) -> dict:
    return {
        "name": scene.name,
        "lower": scene.lower.tolist(),
        "upper": scene.upper.tolist(),
        "obstacles": [_obstacle_to_dict(o) for o in scene.obstacles],
    }


def scene_from_dict(data: dict) -> Scene:
    try:
        name = data["name"]
        lower = as_config(data["lower"])
        upper = as_config(data["upper"])
    except KeyError as e:
        raise ValueError(f"scene file missing field {e.args[0]!r}") from None
    obstacles = []
    for i, entry in enumerate(data.get("obstacles", [])):
        where = f"obstacles[{i}]"
        kind = entry.get("type")
        try:
            if kind == "box":
                obstacles.append(Box(as_config(entry["min"]), as_config(entry["max"])))
            elif kind == "sphere":
                obstacles.append(Sphere(as_config(entry["center"]), float(entry["radius"])))
            else:
                raise ValueError(f"unknown obstacle type {kind!r}")
        except (KeyError, ValueError) as e:
            raise ValueError(f"{where}: {e}") from None
    return Scene(name=name, lower=lower, upper=upper, obstacles=tuple(obstacles))


def load_scene(path) -> Scene:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: invalid JSON: {e}") from None
    try:
        return scene_from_dict(data)
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None


def save_scene(scene: Scene, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(scene_to_dict(scene), f, indent=2)
        f.write("\n")
