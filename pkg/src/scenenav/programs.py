"""Filter programs: the functional form of instructions, plus interpreter and sampler."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import NoUniqueInstruction, NonUniqueReferent
from .scene import (
    Color,
    ObjectDescriptor,
    SceneGraph,
    Shape,
    Size,
    SpatialRelation,
    matches,
    relate,
)


@dataclass(frozen=True)
class SceneAll:
    """Denotes every object in the scene."""


@dataclass(frozen=True)
class Filter:
    descriptor: ObjectDescriptor
    inner: "Term"


@dataclass(frozen=True)
class Relate:
    relation: SpatialRelation
    inner: "Term"


@dataclass(frozen=True)
class Unique:
    inner: "Term"


Term = Union[SceneAll, Filter, Relate, Unique]
FilterProgram = Unique


class InstructionKind(str, Enum):
    SIMPLE = "simple"
    COMPLEX = "complex"


def simple_program(d: ObjectDescriptor) -> FilterProgram:
    return Unique(Filter(d, SceneAll()))


def complex_program(d2: ObjectDescriptor, r: SpatialRelation,
                    d1: ObjectDescriptor) -> FilterProgram:
    """Target described by d2, located r of the unique referent described by d1."""
    if d1.shape is None:
        raise ValueError("referent descriptor must name a concrete shape")
    return Unique(Filter(d2, Relate(r, Unique(Filter(d1, SceneAll())))))


def kind_of(p: FilterProgram) -> InstructionKind:
    inner = p.inner
    if isinstance(inner, Filter) and isinstance(inner.inner, SceneAll):
        return InstructionKind.SIMPLE
    if isinstance(inner, Filter) and isinstance(inner.inner, Relate):
        return InstructionKind.COMPLEX
    raise ValueError(f"unrecognized program form: {p!r}")


def eval_program(term: Term, scene: SceneGraph) -> FrozenSet[int]:
    """Denotation of a program term as a set of object ids."""
    if isinstance(term, SceneAll):
        return frozenset(scene.ids)
    if isinstance(term, Filter):
        inner = eval_program(term.inner, scene)
        return frozenset(oid for oid in inner
                         if matches(term.descriptor, scene.object_by_id(oid)))
    if isinstance(term, Relate):
        inner = eval_program(term.inner, scene)
        if len(inner) != 1:
            raise NonUniqueReferent(f"relate expects a singleton, got {len(inner)} objects")
        (b,) = inner
        return frozenset(oid for oid in scene.ids
                         if oid != b and term.relation in relate(scene, oid, b))
    if isinstance(term, Unique):
        inner = eval_program(term.inner, scene)
        if len(inner) != 1:
            raise NonUniqueReferent(f"unique expects a singleton, got {len(inner)} objects")
        return inner
    raise TypeError(f"not a program term: {term!r}")


def denotes_unique(p: FilterProgram, scene: SceneGraph) -> Optional[int]:
    """Target id if the program denotes exactly one object, else None."""
    try:
        result = eval_program(p, scene)
    except NonUniqueReferent:
        return None
    if len(result) != 1:
        return None
    (oid,) = result
    return oid


@dataclass(frozen=True)
class InstructionRecord:
    scene_id: int
    kind: InstructionKind
    text: str
    program: FilterProgram
    target_id: int


# --- descriptor spaces -------------------------------------------------------

_SIZES = (None,) + tuple(Size)
_COLORS = (None,) + tuple(Color)
_SHAPES = (None,) + tuple(Shape)


def all_descriptors() -> Tuple[ObjectDescriptor, ...]:
    """Every descriptor, including the empty one (bare 'object')."""
    return tuple(ObjectDescriptor(size=s, color=c, shape=sh)
                 for s, c, sh in itertools.product(_SIZES, _COLORS, _SHAPES))


def all_referent_descriptors() -> Tuple[ObjectDescriptor, ...]:
    """Descriptors legal as a complex-instruction referent (concrete shape)."""
    return tuple(d for d in all_descriptors() if d.shape is not None)


def fully_specified_descriptors() -> Tuple[ObjectDescriptor, ...]:
    return tuple(d for d in all_descriptors() if d.is_fully_specified)


def enumerate_programs() -> Iterator[FilterProgram]:
    """All programs in the grammar: every simple form, then every complex form."""
    descriptors = all_descriptors()
    for d in descriptors:
        yield simple_program(d)
    for d1 in all_referent_descriptors():
        for r in SpatialRelation:
            for d2 in descriptors:
                yield complex_program(d2, r, d1)


def enumerate_complex_space(
        relations: Sequence[SpatialRelation] = tuple(SpatialRelation)) -> int:
    """Count of complex instructions over fully-specified descriptor pairs.

    Computed by actual enumeration rather than multiplication.
    """
    count = 0
    full = fully_specified_descriptors()
    for _d1 in full:
        for _r in relations:
            for _d2 in full:
                count += 1
    return count


def fully_specified_count() -> int:
    return len(fully_specified_descriptors())


# --- sampling ----------------------------------------------------------------

DEFAULT_ATTEMPT_BUDGET = 1000


def sample_instruction(scene: SceneGraph, kind: InstructionKind, seed: int,
                       lexicon, max_attempts: int = DEFAULT_ATTEMPT_BUDGET
                       ) -> InstructionRecord:
    """Rejection-sample a program of the given kind that denotes a unique object."""
    from .language import realize  # local import to avoid a module cycle

    rng = random.Random(seed)
    descriptors = all_descriptors()
    referents = all_referent_descriptors()
    relations = tuple(SpatialRelation)
    for _ in range(max_attempts):
        if kind is InstructionKind.SIMPLE:
            program = simple_program(rng.choice(descriptors))
        else:
            d1 = rng.choice(referents)
            r = rng.choice(relations)
            d2 = rng.choice(descriptors)
            program = complex_program(d2, r, d1)
        target = denotes_unique(program, scene)
        if target is not None:
            return InstructionRecord(scene_id=scene.id, kind=kind,
                                     text=realize(program, lexicon),
                                     program=program, target_id=target)
    raise NoUniqueInstruction(
        f"no unique {kind.value} instruction for scene {scene.id} "
        f"after {max_attempts} attempts")


# --- serialization (nested prefix form) --------------------------------------

def _descriptor_to_json(d: ObjectDescriptor) -> dict:
    out = {}
    if d.size is not None:
        out["size"] = d.size.value
    if d.color is not None:
        out["color"] = d.color.value
    if d.shape is not None:
        out["shape"] = d.shape.value
    return out


def _descriptor_from_json(obj: dict) -> ObjectDescriptor:
    return ObjectDescriptor(
        size=Size(obj["size"]) if "size" in obj else None,
        color=Color(obj["color"]) if "color" in obj else None,
        shape=Shape(obj["shape"]) if "shape" in obj else None,
    )


def program_to_json(term: Term) -> list:
    if isinstance(term, SceneAll):
        return ["scene"]
    if isinstance(term, Filter):
        return ["filter", _descriptor_to_json(term.descriptor),
                program_to_json(term.inner)]
    if isinstance(term, Relate):
        return ["relate", term.relation.value, program_to_json(term.inner)]
    if isinstance(term, Unique):
        return ["unique", program_to_json(term.inner)]
    raise TypeError(f"not a program term: {term!r}")


def program_from_json(obj: list) -> Term:
    head = obj[0]
    if head == "scene":
        return SceneAll()
    if head == "filter":
        return Filter(_descriptor_from_json(obj[1]), program_from_json(obj[2]))
    if head == "relate":
        return Relate(SpatialRelation(obj[1]), program_from_json(obj[2]))
    if head == "unique":
        return Unique(program_from_json(obj[1]))
    raise ValueError(f"unknown program node: {head!r}")
