"""Brute-force uniqueness checker, kept independent of the main interpreter.

Deliberately reimplements descriptor matching and the relation sign tests from
first principles so dataset validation never shares a code path with
eval_program / relate.
"""

from __future__ import annotations

from typing import Optional, Set

from .programs import Filter, FilterProgram, InstructionRecord, Relate, SceneAll, Unique
from .scene import RELATION_MARGIN, SceneGraph, SceneObject, SpatialRelation


def _attrs_match(descriptor_fields: dict, o: SceneObject) -> bool:
    for name, want in descriptor_fields.items():
        if want is not None and getattr(o, name) != want:
            return False
    return True


def _holds(r: SpatialRelation, a: SceneObject, b: SceneObject,
           scene: SceneGraph, margin: float) -> bool:
    dx = a.position[0] - b.position[0]
    dy = a.position[1] - b.position[1]
    lx, ly = scene.camera.left_dir
    fx, fy = scene.camera.front_dir
    if r is SpatialRelation.LEFT:
        return dx * lx + dy * ly > margin
    if r is SpatialRelation.RIGHT:
        return -(dx * lx + dy * ly) > margin
    if r is SpatialRelation.BEHIND:
        return dx * fx + dy * fy > margin
    if r is SpatialRelation.FRONT:
        return -(dx * fx + dy * fy) > margin
    raise ValueError(r)


def brute_force_denotation(p: FilterProgram, scene: SceneGraph,
                           margin: float = RELATION_MARGIN) -> Optional[Set[int]]:
    """Denotation of a simple or complex program by direct enumeration.

    None when any uniqueness requirement fails.
    """
    inner = p.inner
    if not isinstance(inner, Filter):
        raise ValueError(f"unsupported program form: {p!r}")
    d2 = inner.descriptor
    d2_fields = {"size": d2.size, "color": d2.color, "shape": d2.shape}

    if isinstance(inner.inner, SceneAll):
        hits = {o.id for o in scene.objects if _attrs_match(d2_fields, o)}
        return hits if len(hits) == 1 else None

    if isinstance(inner.inner, Relate):
        rel_node = inner.inner
        ref_unique = rel_node.inner
        if not (isinstance(ref_unique, Unique) and isinstance(ref_unique.inner, Filter)
                and isinstance(ref_unique.inner.inner, SceneAll)):
            raise ValueError(f"unsupported program form: {p!r}")
        d1 = ref_unique.inner.descriptor
        d1_fields = {"size": d1.size, "color": d1.color, "shape": d1.shape}
        referents = [o for o in scene.objects if _attrs_match(d1_fields, o)]
        if len(referents) != 1:
            return None
        ref = referents[0]
        hits = {o.id for o in scene.objects
                if o.id != ref.id
                and _holds(rel_node.relation, o, ref, scene, margin)
                and _attrs_match(d2_fields, o)}
        return hits if len(hits) == 1 else None

    raise ValueError(f"unsupported program form: {p!r}")


def verify_record(record: InstructionRecord, scene: SceneGraph) -> bool:
    """True iff the record's program denotes exactly {record.target_id}."""
    if record.scene_id != scene.id:
        return False
    denotation = brute_force_denotation(record.program, scene)
    return denotation == {record.target_id}
