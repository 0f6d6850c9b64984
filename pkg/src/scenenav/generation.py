"""Scene sources: seeded random generation and CLEVR scene ingestion."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import List

from .errors import (
    EmptySceneError,
    GenerationExhausted,
    MissingAttributeError,
    UnknownValueError,
)
from .scene import (
    DEFAULT_BOUNDS,
    DEFAULT_CAMERA,
    RELATION_MARGIN,
    CameraFrame,
    Color,
    SceneBounds,
    SceneGraph,
    SceneObject,
    Shape,
    Size,
)

DEFAULT_D_MIN = 0.6

_COLORS = tuple(Color)
_SHAPES = tuple(Shape)
_SIZES = tuple(Size)


@dataclass(frozen=True)
class GenConfig:
    n_objects: int
    seed: int
    bounds: SceneBounds = DEFAULT_BOUNDS
    d_min: float = DEFAULT_D_MIN
    max_rejections: int = 10_000
    margin: float = RELATION_MARGIN

    def __post_init__(self):
        if self.n_objects < 1:
            raise ValueError("n_objects must be >= 1")
        if self.d_min <= 2 * self.margin:
            raise ValueError(f"d_min must exceed 2*margin = {2 * self.margin}")
        if self.max_rejections < 1:
            raise ValueError("max_rejections must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _placement_ok(p, placed, cfg: GenConfig) -> bool:
    for q in placed:
        dx, dy = p[0] - q[0], p[1] - q[1]
        if math.hypot(dx, dy) < cfg.d_min:
            return False
        # relation-ambiguous pair: within margin on both camera axes
        lx, ly = DEFAULT_CAMERA.left_dir
        fx, fy = DEFAULT_CAMERA.front_dir
        if abs(dx * lx + dy * ly) <= cfg.margin and abs(dx * fx + dy * fy) <= cfg.margin:
            return False
    return True


def generate_scene(cfg: GenConfig, scene_id: int = 0) -> SceneGraph:
    """Rejection-sample a valid scene; deterministic for a given config."""
    rng = random.Random(cfg.seed)
    b = cfg.bounds
    placed: List[tuple] = []
    objects: List[SceneObject] = []
    for oid in range(cfg.n_objects):
        color = rng.choice(_COLORS)
        shape = rng.choice(_SHAPES)
        size = rng.choice(_SIZES)
        rejections = 0
        while True:
            p = (rng.uniform(b.x_min, b.x_max), rng.uniform(b.y_min, b.y_max))
            if _placement_ok(p, placed, cfg):
                break
            rejections += 1
            if rejections >= cfg.max_rejections:
                raise GenerationExhausted(
                    f"{rejections} consecutive rejections placing object {oid}")
        placed.append(p)
        objects.append(SceneObject(id=oid, color=color, shape=shape, size=size, position=p))
    return SceneGraph(id=scene_id, objects=tuple(objects),
                      camera=DEFAULT_CAMERA, bounds=b)


def import_clevr_scene(doc: dict, scene_id: int = 0,
                       bounds: SceneBounds = DEFAULT_BOUNDS,
                       camera: CameraFrame = DEFAULT_CAMERA) -> SceneGraph:
    """Build a SceneGraph from one CLEVR-style scene document.

    Only the object list is trusted; any stored relationships are ignored and
    recomputed on demand. The third coordinate component is dropped.
    """
    raw_objects = doc.get("objects")
    if not raw_objects:
        raise EmptySceneError("scene document contains no objects")
    objects = []
    for k, raw in enumerate(raw_objects):
        for key in ("color", "shape", "size", "3d_coords"):
            if key not in raw:
                raise MissingAttributeError(f"object {k} missing '{key}'")
        try:
            color = Color(raw["color"])
            shape = Shape(raw["shape"])
            size = Size(raw["size"])
        except ValueError as exc:
            raise UnknownValueError(f"object {k}: {exc}") from exc
        coords = raw["3d_coords"]
        if len(coords) < 2:
            raise MissingAttributeError(f"object {k}: '3d_coords' needs >= 2 components")
        objects.append(SceneObject(id=k, color=color, shape=shape, size=size,
                                   position=(float(coords[0]), float(coords[1]))))
    return SceneGraph(id=scene_id, objects=tuple(objects), camera=camera, bounds=bounds)
