"""Curriculum stages and the per-stage episode sampler."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, List

from .errors import InsufficientDataError
from .programs import InstructionKind, InstructionRecord

DEFAULT_STAGE_BUDGET = 10_000


@dataclass(frozen=True)
class CurriculumStage:
    n_objects: int
    complex_proportion: float
    episode_budget: int = DEFAULT_STAGE_BUDGET

    def __post_init__(self):
        if self.n_objects < 1:
            raise ValueError("n_objects must be >= 1")
        if not 0.0 <= self.complex_proportion <= 1.0:
            raise ValueError("complex_proportion must lie in [0, 1]")
        if self.episode_budget < 1:
            raise ValueError("episode_budget must be >= 1")


def default_curriculum(episode_budget: int = DEFAULT_STAGE_BUDGET) -> List[CurriculumStage]:
    """The five training stages: growing complex proportion, then more objects."""
    return [
        CurriculumStage(3, 0.0, episode_budget),
        CurriculumStage(3, 0.1, episode_budget),
        CurriculumStage(3, 0.5, episode_budget),
        CurriculumStage(3, 0.75, episode_budget),
        CurriculumStage(5, 0.5, episode_budget),
    ]


def stage_sampler(stage: CurriculumStage, scenes, records, seed: int
                  ) -> Iterator[InstructionRecord]:
    """Endless i.i.d. stream of records for one stage.

    Each draw is complex with probability stage.complex_proportion, restricted
    to scenes with exactly stage.n_objects objects.
    """
    qualifying = {s.id for s in scenes if len(s.objects) == stage.n_objects}
    if not qualifying:
        raise InsufficientDataError(
            f"no scene with exactly {stage.n_objects} objects")
    pools = {
        InstructionKind.SIMPLE: [r for r in records
                                 if r.scene_id in qualifying
                                 and r.kind is InstructionKind.SIMPLE],
        InstructionKind.COMPLEX: [r for r in records
                                  if r.scene_id in qualifying
                                  and r.kind is InstructionKind.COMPLEX],
    }
    if stage.complex_proportion < 1.0 and not pools[InstructionKind.SIMPLE]:
        raise InsufficientDataError("stage needs simple instructions but none qualify")
    if stage.complex_proportion > 0.0 and not pools[InstructionKind.COMPLEX]:
        raise InsufficientDataError("stage needs complex instructions but none qualify")

    rng = random.Random(seed)

    def stream():
        while True:
            kind = (InstructionKind.COMPLEX
                    if rng.random() < stage.complex_proportion
                    else InstructionKind.SIMPLE)
            pool = pools[kind]
            yield pool[rng.randrange(len(pool))]

    return stream()
