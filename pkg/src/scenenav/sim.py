"""Discrete navigation episodes: dynamics, rewards, observations, baseline policies."""

from __future__ import annotations

import dataclasses
import math
import random
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Mapping, Optional, Tuple

from .errors import EpisodeFinished, SceneMismatchError, UnknownTargetError
from .mapping import MappedScene, Pose
from .programs import InstructionRecord
from .scene import Color, Size

TWO_PI = 2.0 * math.pi


class Action(IntEnum):
    # wire encoding 0..3 in this order
    TURN_LEFT = 0
    TURN_RIGHT = 1
    MOVE_FORWARD = 2
    NO_OP = 3


class Outcome(str, Enum):
    REACHED_TARGET = "reached_target"
    REACHED_WRONG = "reached_wrong"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class RewardScheme:
    name: str
    correct: float
    wrong: float
    timeout: float
    per_step: float


SPARSE = RewardScheme("sparse", correct=1.0, wrong=-0.2, timeout=0.0, per_step=0.0)
DENSE = RewardScheme("dense", correct=10.0, wrong=-5.0, timeout=0.0, per_step=-0.1)


def reward_scheme(name: str) -> RewardScheme:
    if name == "sparse":
        return SPARSE
    if name == "dense":
        return DENSE
    raise ValueError(f"unknown reward scheme {name!r}")


@dataclass(frozen=True)
class EnvConfig:
    timeout_T: int = 30
    turn_delta: float = math.pi / 6
    move_step: float = 25.6
    reach_radius: float = 24.0
    large_reach_scale: float = 1.5
    fov: float = math.pi / 2
    reward_scheme: RewardScheme = SPARSE
    terminate_on_any_contact: bool = True

    def __post_init__(self):
        if self.timeout_T < 1:
            raise ValueError("timeout_T must be >= 1")
        for name in ("turn_delta", "move_step", "reach_radius", "fov"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def reach_for(self, size: Size) -> float:
        return self.reach_radius * (self.large_reach_scale if size is Size.LARGE else 1.0)


@dataclass(frozen=True)
class VisibleObject:
    id: int
    kind: str
    color: Color
    size: Size
    bearing: float  # radians, left positive
    distance: float


@dataclass(frozen=True)
class Observation:
    instruction_tokens: Tuple[int, ...]
    visible: Tuple[VisibleObject, ...]
    t: int

    def to_doc(self) -> dict:
        return {
            "instruction_tokens": list(self.instruction_tokens),
            "visible": [
                {"id": v.id, "kind": v.kind, "color": v.color.value,
                 "size": v.size.value, "bearing": v.bearing, "distance": v.distance}
                for v in self.visible
            ],
            "t": self.t,
        }


@dataclass(frozen=True)
class EpisodeState:
    scene: MappedScene
    target_id: int
    pose: Pose
    t: int = 0
    done: bool = False
    outcome: Optional[Outcome] = None
    instruction_tokens: Tuple[int, ...] = ()


def _wrap_pi(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    a = angle % TWO_PI
    if a > math.pi:
        a -= TWO_PI
    return a


def bearing_to(pose: Pose, point) -> float:
    """Angle of `point` in the agent frame; positive = to the agent's left."""
    return _wrap_pi(math.atan2(point[1] - pose.y, point[0] - pose.x) - pose.heading)


def observe(state: EpisodeState, cfg: EnvConfig) -> Observation:
    visible = []
    for o in state.scene.objects:
        b = bearing_to(state.pose, o.position)
        if abs(b) <= cfg.fov / 2:
            d = math.hypot(o.position[0] - state.pose.x, o.position[1] - state.pose.y)
            visible.append(VisibleObject(o.id, o.kind, o.color, o.size, b, d))
    visible.sort(key=lambda v: v.bearing)
    return Observation(instruction_tokens=state.instruction_tokens,
                       visible=tuple(visible), t=state.t)


def reset(cfg: EnvConfig, ms: MappedScene, instr: InstructionRecord,
          instruction_tokens: Tuple[int, ...] = ()) -> Tuple[EpisodeState, Observation]:
    if instr.scene_id != ms.scene_id:
        raise SceneMismatchError(
            f"instruction for scene {instr.scene_id}, got scene {ms.scene_id}")
    if not any(o.id == instr.target_id for o in ms.objects):
        raise UnknownTargetError(f"target id {instr.target_id} not in scene {ms.scene_id}")
    state = EpisodeState(scene=ms, target_id=instr.target_id, pose=ms.spawn,
                         instruction_tokens=tuple(instruction_tokens))
    return state, observe(state, cfg)


def _contacted(ms: MappedScene, pos, cfg: EnvConfig):
    """Ids of objects whose reach radius covers pos, nearest first."""
    hits = []
    for o in ms.objects:
        d = math.hypot(o.position[0] - pos[0], o.position[1] - pos[1])
        if d <= cfg.reach_for(o.size):
            hits.append((d, o.id))
    hits.sort()
    return [oid for _, oid in hits]


def step(state: EpisodeState, action: Action, cfg: EnvConfig
         ) -> Tuple[EpisodeState, Observation, float, bool]:
    if state.done:
        raise EpisodeFinished(f"episode over (outcome {state.outcome})")
    action = Action(action)
    pose = state.pose
    if action is Action.TURN_LEFT:
        pose = Pose(pose.x, pose.y, pose.heading + cfg.turn_delta)
    elif action is Action.TURN_RIGHT:
        pose = Pose(pose.x, pose.y, pose.heading - cfg.turn_delta)
    elif action is Action.MOVE_FORWARD:
        nx = pose.x + cfg.move_step * math.cos(pose.heading)
        ny = pose.y + cfg.move_step * math.sin(pose.heading)
        eb = state.scene.env_bounds
        nx = min(max(nx, eb.x_min), eb.x_max)
        ny = min(max(ny, eb.y_min), eb.y_max)
        pose = Pose(nx, ny, pose.heading)
    t = state.t + 1

    reward = cfg.reward_scheme.per_step
    outcome = None
    contacts = _contacted(state.scene, (pose.x, pose.y), cfg)
    if state.target_id in contacts:
        outcome = Outcome.REACHED_TARGET
        reward += cfg.reward_scheme.correct
    elif contacts and cfg.terminate_on_any_contact:
        outcome = Outcome.REACHED_WRONG
        reward += cfg.reward_scheme.wrong
    elif t >= cfg.timeout_T:
        outcome = Outcome.TIMEOUT
        reward += cfg.reward_scheme.timeout

    new_state = dataclasses.replace(state, pose=pose, t=t,
                                    done=outcome is not None, outcome=outcome)
    return new_state, observe(new_state, cfg), reward, new_state.done


def oracle_policy(state: EpisodeState, cfg: EnvConfig) -> Action:
    """Greedy ground-truth controller: aim at the target, then move."""
    target = state.scene.object_by_id(state.target_id)
    b = bearing_to(state.pose, target.position)
    if abs(b) > cfg.turn_delta / 2:
        return Action.TURN_LEFT if b > 0 else Action.TURN_RIGHT
    return Action.MOVE_FORWARD


class OraclePolicy:
    """Callable policy wrapper around oracle_policy."""

    def __call__(self, state: EpisodeState, obs: Observation, cfg: EnvConfig) -> Action:
        return oracle_policy(state, cfg)


class RandomPolicy:
    """Uniform over the 4 actions, deterministic given its seed."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def __call__(self, state: EpisodeState, obs: Observation, cfg: EnvConfig) -> Action:
        return Action(self._rng.randrange(len(Action)))
