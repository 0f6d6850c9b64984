"""Scene-graph model: attribute vocabulary, objects, camera frame, spatial relations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Set, Tuple

from .errors import SameObjectError, UnknownIdError

# Margin below which a coordinate difference asserts no relation on that axis.
RELATION_MARGIN = 0.05

_UNIT_TOL = 1e-9


class Color(str, Enum):
    GRAY = "gray"
    RED = "red"
    BLUE = "blue"
    GREEN = "green"
    BROWN = "brown"
    PURPLE = "purple"
    CYAN = "cyan"
    YELLOW = "yellow"


class Shape(str, Enum):
    CUBE = "cube"
    SPHERE = "sphere"
    CYLINDER = "cylinder"


class Size(str, Enum):
    SMALL = "small"
    LARGE = "large"


class SpatialRelation(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    FRONT = "front"
    BEHIND = "behind"

    @property
    def inverse(self) -> "SpatialRelation":
        return _INVERSE[self]


_INVERSE = {
    SpatialRelation.LEFT: SpatialRelation.RIGHT,
    SpatialRelation.RIGHT: SpatialRelation.LEFT,
    SpatialRelation.FRONT: SpatialRelation.BEHIND,
    SpatialRelation.BEHIND: SpatialRelation.FRONT,
}

Point = Tuple[float, float]


@dataclass(frozen=True)
class ObjectDescriptor:
    """Partial attribute description; all-absent means the bare noun 'object'."""

    size: Optional[Size] = None
    color: Optional[Color] = None
    shape: Optional[Shape] = None

    @property
    def is_empty(self) -> bool:
        return self.size is None and self.color is None and self.shape is None

    @property
    def is_fully_specified(self) -> bool:
        return self.size is not None and self.color is not None and self.shape is not None


@dataclass(frozen=True)
class SceneObject:
    id: int
    color: Color
    shape: Shape
    size: Size
    position: Point

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"object id must be non-negative, got {self.id}")


@dataclass(frozen=True)
class CameraFrame:
    """Planar view frame grounding left/right (left_dir) and front/behind (front_dir)."""

    left_dir: Point
    front_dir: Point

    def __post_init__(self):
        for name, (dx, dy) in (("left_dir", self.left_dir), ("front_dir", self.front_dir)):
            norm = math.hypot(dx, dy)
            if abs(norm - 1.0) > _UNIT_TOL:
                raise ValueError(f"{name} must be unit length, |v| = {norm}")
        dot = self.left_dir[0] * self.front_dir[0] + self.left_dir[1] * self.front_dir[1]
        if abs(dot) > _UNIT_TOL:
            raise ValueError(f"camera axes must be orthogonal, dot = {dot}")


DEFAULT_CAMERA = CameraFrame(left_dir=(-1.0, 0.0), front_dir=(0.0, 1.0))


@dataclass(frozen=True)
class SceneBounds:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"degenerate bounds: {self}")

    def contains(self, p: Point) -> bool:
        return self.x_min <= p[0] <= self.x_max and self.y_min <= p[1] <= self.y_max


DEFAULT_BOUNDS = SceneBounds(-3.0, 3.0, -3.0, 3.0)


@dataclass(frozen=True)
class SceneGraph:
    id: int
    objects: Tuple[SceneObject, ...]
    camera: CameraFrame = DEFAULT_CAMERA
    bounds: SceneBounds = DEFAULT_BOUNDS

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))

    def object_by_id(self, oid: int) -> SceneObject:
        for o in self.objects:
            if o.id == oid:
                return o
        raise UnknownIdError(f"no object with id {oid} in scene {self.id}")

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(o.id for o in self.objects)


def matches(d: ObjectDescriptor, o: SceneObject) -> bool:
    """True iff every present descriptor field equals the object's attribute."""
    if d.size is not None and d.size != o.size:
        return False
    if d.color is not None and d.color != o.color:
        return False
    if d.shape is not None and d.shape != o.shape:
        return False
    return True


def relate(scene: SceneGraph, a: int, b: int,
           margin: float = RELATION_MARGIN) -> Set[SpatialRelation]:
    """Relations of object a with respect to object b, in the scene's camera frame.

    r is asserted iff the displacement a-b projects onto dir(r) by more than
    `margin`, so at most one of each axis pair can hold.
    """
    if a == b:
        raise SameObjectError(f"relate({a}, {a}) is undefined")
    oa = scene.object_by_id(a)
    ob = scene.object_by_id(b)
    dx = oa.position[0] - ob.position[0]
    dy = oa.position[1] - ob.position[1]
    lx, ly = scene.camera.left_dir
    fx, fy = scene.camera.front_dir
    along_left = dx * lx + dy * ly
    along_front = dx * fx + dy * fy
    result: Set[SpatialRelation] = set()
    if along_left > margin:
        result.add(SpatialRelation.LEFT)
    elif along_left < -margin:
        result.add(SpatialRelation.RIGHT)
    if along_front > margin:
        result.add(SpatialRelation.BEHIND)
    elif along_front < -margin:
        result.add(SpatialRelation.FRONT)
    return result


@dataclass(frozen=True)
class Violation:
    kind: str  # one of OUT_OF_BOUNDS, DUPLICATE_ID, MIN_SEPARATION, AMBIGUOUS_PAIR
    message: str
    object_ids: Tuple[int, ...] = ()


OUT_OF_BOUNDS = "out_of_bounds"
DUPLICATE_ID = "duplicate_id"
MIN_SEPARATION = "min_separation"
AMBIGUOUS_PAIR = "ambiguous_pair"


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> Set[str]:
        return {v.kind for v in self.violations}


def _ambiguous(scene: SceneGraph, a: SceneObject, b: SceneObject, margin: float) -> bool:
    dx = a.position[0] - b.position[0]
    dy = a.position[1] - b.position[1]
    lx, ly = scene.camera.left_dir
    fx, fy = scene.camera.front_dir
    return (abs(dx * lx + dy * ly) <= margin and abs(dx * fx + dy * fy) <= margin)


def validate_scene(scene: SceneGraph, d_min: float,
                   margin: float = RELATION_MARGIN) -> ValidationReport:
    """Structural check: bounds, id uniqueness, separation, relation ambiguity."""
    report = ValidationReport()
    seen = set()
    for o in scene.objects:
        if o.id in seen:
            report.violations.append(
                Violation(DUPLICATE_ID, f"duplicate object id {o.id}", (o.id,)))
        seen.add(o.id)
        if not scene.bounds.contains(o.position):
            report.violations.append(
                Violation(OUT_OF_BOUNDS,
                          f"object {o.id} at {o.position} outside {scene.bounds}", (o.id,)))
    objs = scene.objects
    for i in range(len(objs)):
        for j in range(i + 1, len(objs)):
            a, b = objs[i], objs[j]
            dist = math.hypot(a.position[0] - b.position[0], a.position[1] - b.position[1])
            if dist < d_min:
                report.violations.append(
                    Violation(MIN_SEPARATION,
                              f"objects {a.id},{b.id} separated by {dist:.4f} < {d_min}",
                              (a.id, b.id)))
            if _ambiguous(scene, a, b, margin):
                report.violations.append(
                    Violation(AMBIGUOUS_PAIR,
                              f"objects {a.id},{b.id} have no relation on either axis",
                              (a.id, b.id)))
    return report
