"""Episode rollouts and the accuracy-over-N evaluation protocol."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .language import tokenize
from .mapping import MapConfig, MappedScene, map_scene
from .programs import InstructionKind, InstructionRecord
from .scene import SceneGraph
from .sim import Action, EnvConfig, EpisodeState, Observation, Outcome, reset, step

Policy = Callable[[EpisodeState, Observation, EnvConfig], Action]

DEFAULT_EVAL_EPISODES = 300


@dataclass
class EvalReport:
    episodes: int
    simple_accuracy: Optional[float]
    complex_accuracy: Optional[float]
    mean_return: float
    outcome_counts: Dict[str, int]

    def to_doc(self) -> dict:
        return {
            "episodes": self.episodes,
            "simple_accuracy": self.simple_accuracy,
            "complex_accuracy": self.complex_accuracy,
            "mean_return": self.mean_return,
            "outcome_counts": dict(sorted(self.outcome_counts.items())),
        }


@dataclass(frozen=True)
class EpisodeResult:
    kind: InstructionKind
    outcome: Outcome
    total_reward: float
    steps: int
    step_log: Tuple[Tuple[int, float, bool], ...] = ()  # (action, reward, done)


def run_episode(policy: Policy, cfg: EnvConfig, ms: MappedScene,
                record: InstructionRecord, lexicon_mode: str = "env",
                keep_step_log: bool = False) -> EpisodeResult:
    tokens = tuple(tokenize(record.text, lexicon_mode))
    state, obs = reset(cfg, ms, record, instruction_tokens=tokens)
    log: List[Tuple[int, float, bool]] = []
    while not state.done:
        action = policy(state, obs, cfg)
        state, obs, reward, done = step(state, action, cfg)
        if keep_step_log:
            log.append((int(action), reward, done))
    # closed form of the per-step sum; avoids accumulation rounding
    scheme = cfg.reward_scheme
    bonus = {Outcome.REACHED_TARGET: scheme.correct,
             Outcome.REACHED_WRONG: scheme.wrong,
             Outcome.TIMEOUT: scheme.timeout}[state.outcome]
    total = scheme.per_step * state.t + bonus
    return EpisodeResult(kind=record.kind, outcome=state.outcome,
                         total_reward=total, steps=state.t,
                         step_log=tuple(log))


def path_is_clear(ms: MappedScene, target_id: int, cfg: EnvConfig,
                  margin: float = 32.0) -> bool:
    """No non-target object sits near the straight spawn-to-target segment.

    Used to select obstacle-free episodes: the greedy controller stays close to
    the line of sight, so clearance of reach radius plus `margin` suffices.
    """
    target = ms.object_by_id(target_id)
    ax, ay = ms.spawn.x, ms.spawn.y
    bx, by = target.position
    abx, aby = bx - ax, by - ay
    ab2 = abx * abx + aby * aby
    for o in ms.objects:
        if o.id == target_id:
            continue
        t = 0.0 if ab2 == 0 else max(0.0, min(1.0, ((o.position[0] - ax) * abx +
                                                    (o.position[1] - ay) * aby) / ab2))
        px, py = ax + t * abx, ay + t * aby
        d = math.hypot(o.position[0] - px, o.position[1] - py)
        if d <= cfg.reach_for(o.size) + margin:
            return False
    return True


def evaluate(policy: Policy, episodes: Iterable[Tuple[InstructionRecord, SceneGraph]],
             n: int = DEFAULT_EVAL_EPISODES, cfg: EnvConfig = EnvConfig(),
             map_config: MapConfig = MapConfig(), lexicon_mode: str = "env",
             obstacle_free_only: bool = False) -> EvalReport:
    """Run n episodes to termination and aggregate per-kind accuracy."""
    if n < 1:
        raise ValueError("n must be >= 1")
    per_kind_hits: Dict[InstructionKind, int] = {}
    per_kind_total: Dict[InstructionKind, int] = {}
    outcome_counts: Dict[str, int] = {o.value: 0 for o in Outcome}
    returns = []
    ran = 0
    mapped_cache: Dict[int, MappedScene] = {}
    for record, scene in episodes:
        if ran >= n:
            break
        ms = mapped_cache.get(scene.id)
        if ms is None or ms.scene_id != scene.id:
            ms = map_scene(scene, map_config)
            mapped_cache[scene.id] = ms
        if obstacle_free_only and not path_is_clear(ms, record.target_id, cfg):
            continue
        result = run_episode(policy, cfg, ms, record, lexicon_mode)
        ran += 1
        returns.append(result.total_reward)
        outcome_counts[result.outcome.value] += 1
        per_kind_total[record.kind] = per_kind_total.get(record.kind, 0) + 1
        if result.outcome is Outcome.REACHED_TARGET:
            per_kind_hits[record.kind] = per_kind_hits.get(record.kind, 0) + 1
    if ran < n:
        raise ValueError(f"only {ran} qualifying episodes available, wanted {n}")

    def acc(kind: InstructionKind) -> Optional[float]:
        total = per_kind_total.get(kind, 0)
        if total == 0:
            return None
        return per_kind_hits.get(kind, 0) / total

    return EvalReport(
        episodes=ran,
        simple_accuracy=acc(InstructionKind.SIMPLE),
        complex_accuracy=acc(InstructionKind.COMPLEX),
        mean_return=sum(returns) / len(returns),
        outcome_counts=outcome_counts,
    )
