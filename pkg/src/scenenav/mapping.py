"""Scene -> environment mapping: coordinates, object kinds, spawn pose."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .errors import DegenerateBoundsError
from .language import ENV_NOUNS
from .scene import CameraFrame, Color, Point, SceneBounds, SceneGraph, SceneObject, Size

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EnvBounds:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"degenerate bounds: {self}")

    def contains(self, p: Point) -> bool:
        return self.x_min <= p[0] <= self.x_max and self.y_min <= p[1] <= self.y_max

    @property
    def center(self) -> Point:
        return ((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)


# Walls of the playable area, the band objects are placed in, and how far from
# the camera-side wall the agent spawns. Sized so the farthest band corner is
# ~372 units from the spawn: the greedy controller covers ~390 within 30 steps
# even in its worst turn/move oscillation.
DEFAULT_ENV_BOUNDS = EnvBounds(0.0, 512.0, 0.0, 512.0)
DEFAULT_OBJECT_BAND = EnvBounds(96.0, 416.0, 96.0, 416.0)
DEFAULT_SPAWN_STANDOFF = 80.0


@dataclass(frozen=True)
class MapConfig:
    env_bounds: EnvBounds = DEFAULT_ENV_BOUNDS
    object_band: EnvBounds = DEFAULT_OBJECT_BAND
    spawn_standoff: float = DEFAULT_SPAWN_STANDOFF


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float  # radians, normalized to [0, 2*pi)

    def __post_init__(self):
        object.__setattr__(self, "heading", self.heading % TWO_PI)


@dataclass(frozen=True)
class EnvObject:
    id: int
    kind: str  # column / skull / torch
    color: Color
    size: Size
    position: Point


@dataclass(frozen=True)
class MappedScene:
    scene_id: int
    objects: Tuple[EnvObject, ...]
    spawn: Pose
    env_bounds: EnvBounds

    def object_by_id(self, oid: int) -> EnvObject:
        for o in self.objects:
            if o.id == oid:
                return o
        raise KeyError(oid)


def _map_axis(v: float, s_min: float, s_max: float, e_min: float, e_max: float) -> float:
    if s_max - s_min == 0.0:
        raise DegenerateBoundsError("scene bounds have zero extent on an axis")
    return (v * (e_max - e_min) + (s_max * e_min - s_min * e_max)) / (s_max - s_min)


def map_point(sb: SceneBounds, eb: EnvBounds, p: Point) -> Point:
    """Per-axis affine map sending scene bounds onto environment bounds."""
    return (_map_axis(p[0], sb.x_min, sb.x_max, eb.x_min, eb.x_max),
            _map_axis(p[1], sb.y_min, sb.y_max, eb.y_min, eb.y_max))


def map_object(o: SceneObject, sb: SceneBounds, eb: EnvBounds) -> EnvObject:
    return EnvObject(id=o.id, kind=ENV_NOUNS[o.shape], color=o.color, size=o.size,
                     position=map_point(sb, eb, o.position))


def mapped_front_dir(camera: CameraFrame, sb: SceneBounds, eb: EnvBounds) -> Point:
    """Camera front direction after the (positive, per-axis) scale of the map."""
    sx = (eb.x_max - eb.x_min) / (sb.x_max - sb.x_min)
    sy = (eb.y_max - eb.y_min) / (sb.y_max - sb.y_min)
    fx, fy = camera.front_dir[0] * sx, camera.front_dir[1] * sy
    norm = math.hypot(fx, fy)
    return (fx / norm, fy / norm)


def spawn_pose(env_bounds: EnvBounds, front: Point, standoff: float) -> Pose:
    """Agent start: on the camera side of the map, facing along the camera front.

    Walks from the map center against the front direction to the wall, then
    back inside by `standoff`; for an axis-aligned camera this is the wall-edge
    midpoint offset by the standoff.
    """
    cx, cy = env_bounds.center
    fx, fy = front
    t_exit = math.inf
    if fx > 0:
        t_exit = min(t_exit, (cx - env_bounds.x_min) / fx)
    elif fx < 0:
        t_exit = min(t_exit, (env_bounds.x_max - cx) / -fx)
    if fy > 0:
        t_exit = min(t_exit, (cy - env_bounds.y_min) / fy)
    elif fy < 0:
        t_exit = min(t_exit, (env_bounds.y_max - cy) / -fy)
    t = t_exit - standoff
    return Pose(x=cx - fx * t, y=cy - fy * t, heading=math.atan2(fy, fx))


def map_scene(scene: SceneGraph, cfg: MapConfig = MapConfig()) -> MappedScene:
    objects = tuple(map_object(o, scene.bounds, cfg.object_band) for o in scene.objects)
    front = mapped_front_dir(scene.camera, scene.bounds, cfg.object_band)
    spawn = spawn_pose(cfg.env_bounds, front, cfg.spawn_standoff)
    return MappedScene(scene_id=scene.id, objects=objects, spawn=spawn,
                       env_bounds=cfg.env_bounds)
