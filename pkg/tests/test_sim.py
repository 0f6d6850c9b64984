import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenenav.errors import EpisodeFinished, SceneMismatchError, UnknownTargetError
from scenenav.generation import GenConfig, generate_scene
from scenenav.language import env_lexicon
from scenenav.mapping import EnvBounds, EnvObject, MappedScene, Pose, map_scene
from scenenav.programs import (
    InstructionKind,
    InstructionRecord,
    sample_instruction,
    simple_program,
)
from scenenav.scene import Color, ObjectDescriptor, Size
from scenenav.sim import (
    DENSE,
    SPARSE,
    Action,
    EnvConfig,
    Outcome,
    RandomPolicy,
    bearing_to,
    observe,
    oracle_policy,
    reset,
    step,
)

EB = EnvBounds(0.0, 512.0, 0.0, 512.0)


def _env_obj(oid, pos, size=Size.SMALL, kind="torch", color=Color.RED):
    return EnvObject(id=oid, kind=kind, color=color, size=size, position=pos)


def _ms(*objects, spawn=Pose(256.0, 80.0, math.pi / 2)):
    return MappedScene(scene_id=0, objects=objects, spawn=spawn, env_bounds=EB)


def _rec(target=0):
    return InstructionRecord(0, InstructionKind.SIMPLE, "go to the torch",
                             simple_program(ObjectDescriptor()), target)


def test_action_wire_encoding():
    assert [int(a) for a in Action] == [0, 1, 2, 3]
    assert Action.TURN_LEFT == 0 and Action.NO_OP == 3


def test_reward_constants():
    assert (SPARSE.correct, SPARSE.wrong, SPARSE.timeout, SPARSE.per_step) == \
        (1.0, -0.2, 0.0, 0.0)
    assert (DENSE.correct, DENSE.wrong, DENSE.timeout, DENSE.per_step) == \
        (10.0, -5.0, 0.0, -0.1)


class TestReset:
    def test_initial_state(self):
        ms = _ms(_env_obj(0, (256.0, 300.0)))
        state, obs = reset(EnvConfig(), ms, _rec())
        assert state.t == 0 and not state.done
        assert state.pose == ms.spawn
        assert obs.t == 0

    def test_scene_mismatch(self):
        ms = _ms(_env_obj(0, (256.0, 300.0)))
        rec = InstructionRecord(9, InstructionKind.SIMPLE, "x",
                                simple_program(ObjectDescriptor()), 0)
        with pytest.raises(SceneMismatchError):
            reset(EnvConfig(), ms, rec)

    def test_unknown_target(self):
        ms = _ms(_env_obj(0, (256.0, 300.0)))
        with pytest.raises(UnknownTargetError):
            reset(EnvConfig(), ms, _rec(target=5))

    def test_spawn_observation_sees_centroid_side_objects(self):
        ms = _ms(_env_obj(0, (256.0, 300.0)))
        _, obs = reset(EnvConfig(), ms, _rec())
        assert len(obs.visible) == 1
        assert obs.visible[0].bearing == pytest.approx(0.0)


class TestStep:
    def test_no_op(self):
        ms = _ms(_env_obj(0, (256.0, 400.0)))
        state, _ = reset(EnvConfig(), ms, _rec())
        state2, _, reward, done = step(state, Action.NO_OP, EnvConfig())
        assert state2.pose == state.pose
        assert state2.t == 1 and not done and reward == 0.0

    def test_move_forward_along_heading(self):
        cfg = EnvConfig()
        ms = _ms(_env_obj(0, (256.0, 400.0)), spawn=Pose(100.0, 100.0, 0.0))
        state, _ = reset(cfg, ms, _rec())
        state2, _, _, _ = step(state, Action.MOVE_FORWARD, cfg)
        assert state2.pose.x == pytest.approx(100.0 + cfg.move_step)
        assert state2.pose.y == pytest.approx(100.0)

    def test_turns_adjust_heading(self):
        cfg = EnvConfig()
        ms = _ms(_env_obj(0, (256.0, 400.0)))
        state, _ = reset(cfg, ms, _rec())
        left, _, _, _ = step(state, Action.TURN_LEFT, cfg)
        right, _, _, _ = step(state, Action.TURN_RIGHT, cfg)
        assert left.pose.heading == pytest.approx(math.pi / 2 + cfg.turn_delta)
        assert right.pose.heading == pytest.approx(math.pi / 2 - cfg.turn_delta)

    def test_reach_target_sparse(self):
        cfg = EnvConfig()
        ms = _ms(_env_obj(0, (256.0, 80.0 + cfg.move_step)))
        state, _ = reset(cfg, ms, _rec())
        state2, _, reward, done = step(state, Action.MOVE_FORWARD, cfg)
        assert done and state2.outcome is Outcome.REACHED_TARGET
        assert reward == 1.0

    def test_reach_wrong_sparse(self):
        cfg = EnvConfig()
        ms = _ms(_env_obj(0, (256.0, 400.0)),
                 _env_obj(1, (256.0, 80.0 + cfg.move_step)))
        state, _ = reset(cfg, ms, _rec(target=0))
        state2, _, reward, done = step(state, Action.MOVE_FORWARD, cfg)
        assert done and state2.outcome is Outcome.REACHED_WRONG
        assert reward == -0.2

    def test_wrong_contact_nonterminal_when_flag_off(self):
        cfg = EnvConfig(terminate_on_any_contact=False)
        ms = _ms(_env_obj(0, (256.0, 400.0)),
                 _env_obj(1, (256.0, 80.0 + cfg.move_step)))
        state, _ = reset(cfg, ms, _rec(target=0))
        state2, _, reward, done = step(state, Action.MOVE_FORWARD, cfg)
        assert not done and reward == 0.0

    def test_timeout_after_30_no_ops(self):
        cfg = EnvConfig()
        ms = _ms(_env_obj(0, (256.0, 400.0)))
        state, _ = reset(cfg, ms, _rec())
        total = 0.0
        for _ in range(30):
            state, _, reward, done = step(state, Action.NO_OP, cfg)
            total += reward
        assert done and state.outcome is Outcome.TIMEOUT
        assert total == 0.0 and state.t == 30

    def test_step_after_done_raises(self):
        cfg = EnvConfig(timeout_T=1)
        ms = _ms(_env_obj(0, (256.0, 400.0)))
        state, _ = reset(cfg, ms, _rec())
        state, _, _, _ = step(state, Action.NO_OP, cfg)
        with pytest.raises(EpisodeFinished):
            step(state, Action.NO_OP, cfg)

    def test_large_object_has_scaled_reach(self):
        cfg = EnvConfig()
        d = cfg.reach_radius * cfg.large_reach_scale - 1.0
        ms = _ms(_env_obj(0, (256.0, 80.0 + d), size=Size.LARGE))
        state, _ = reset(cfg, ms, _rec())
        state2, _, _, done = step(state, Action.NO_OP, cfg)
        assert done and state2.outcome is Outcome.REACHED_TARGET


@settings(max_examples=100)
@given(seed=st.integers(0, 2**32),
       actions=st.lists(st.sampled_from(Action), min_size=1, max_size=40))
def test_pose_stays_in_bounds_and_t_bounded(seed, actions):
    scene = generate_scene(GenConfig(n_objects=3, seed=seed))
    ms = map_scene(scene)
    rec = sample_instruction(scene, InstructionKind.SIMPLE, seed, env_lexicon())
    cfg = EnvConfig()
    state, _ = reset(cfg, ms, rec)
    for a in actions:
        if state.done:
            break
        state, _, _, _ = step(state, a, cfg)
        assert ms.env_bounds.contains((state.pose.x, state.pose.y))
        assert state.t <= cfg.timeout_T
    assert state.done == (state.outcome is not None)


def test_trajectory_determinism():
    scene = generate_scene(GenConfig(n_objects=3, seed=77))
    ms = map_scene(scene)
    rec = sample_instruction(scene, InstructionKind.SIMPLE, 3, env_lexicon())
    cfg = EnvConfig()

    def run():
        state, _ = reset(cfg, ms, rec)
        policy = RandomPolicy(5)
        out = []
        while not state.done:
            state, _, r, _ = step(state, policy(state, None, cfg), cfg)
            out.append((state.pose, r))
        return out

    assert run() == run()


class TestObserve:
    def test_object_behind_agent_invisible(self):
        ms = _ms(_env_obj(0, (256.0, 10.0)))  # behind the +y-facing spawn
        state, obs = reset(EnvConfig(), ms, _rec())
        assert obs.visible == ()

    def test_bearing_and_distance(self):
        cfg = EnvConfig()
        h = math.pi / 3
        d = 120.0
        spawn = Pose(200.0, 200.0, h)
        ms = _ms(_env_obj(0, (200.0 + d * math.cos(h), 200.0 + d * math.sin(h))),
                 spawn=spawn)
        _, obs = reset(cfg, ms, _rec())
        assert obs.visible[0].bearing == pytest.approx(0.0, abs=1e-12)
        assert obs.visible[0].distance == pytest.approx(d)

    def test_sorted_by_bearing(self):
        for seed in range(10):
            scene = generate_scene(GenConfig(n_objects=5, seed=seed))
            ms = map_scene(scene)
            rec = sample_instruction(scene, InstructionKind.SIMPLE, seed, env_lexicon())
            state, obs = reset(EnvConfig(), ms, rec)
            bearings = [v.bearing for v in obs.visible]
            assert bearings == sorted(bearings)
            assert all(abs(b) <= EnvConfig().fov / 2 for b in bearings)


class TestOraclePolicy:
    def test_move_when_aligned(self):
        ms = _ms(_env_obj(0, (256.0, 300.0)))
        state, _ = reset(EnvConfig(), ms, _rec())
        assert oracle_policy(state, EnvConfig()) is Action.MOVE_FORWARD

    def test_turn_left_when_target_left(self):
        # bearing +pi/3: left-positive convention
        spawn = Pose(256.0, 80.0, math.pi / 2)
        ms = _ms(_env_obj(0, (256.0 + 100 * math.cos(math.pi / 2 + math.pi / 3),
                              80.0 + 100 * math.sin(math.pi / 2 + math.pi / 3))),
                 spawn=spawn)
        state, _ = reset(EnvConfig(), ms, _rec())
        assert oracle_policy(state, EnvConfig()) is Action.TURN_LEFT

    def test_turn_right_when_target_right(self):
        spawn = Pose(256.0, 80.0, math.pi / 2)
        ms = _ms(_env_obj(0, (256.0 + 100 * math.cos(math.pi / 2 - math.pi / 3),
                              80.0 + 100 * math.sin(math.pi / 2 - math.pi / 3))),
                 spawn=spawn)
        state, _ = reset(EnvConfig(), ms, _rec())
        assert oracle_policy(state, EnvConfig()) is Action.TURN_RIGHT


class TestRandomPolicy:
    def test_determinism(self):
        a = RandomPolicy(9)
        b = RandomPolicy(9)
        assert [a(None, None, None) for _ in range(100)] == \
            [b(None, None, None) for _ in range(100)]

    def test_uniformity(self):
        policy = RandomPolicy(123)
        counts = [0, 0, 0, 0]
        n = 1_000_000
        for _ in range(n):
            counts[policy(None, None, None)] += 1
        for c in counts:
            assert abs(c / n - 0.25) < 0.002


def test_bearing_wraps_to_half_open_interval():
    p = Pose(0.0, 0.0, 0.0)
    assert bearing_to(p, (1.0, 0.0)) == pytest.approx(0.0)
    assert bearing_to(p, (-1.0, 1e-9)) == pytest.approx(math.pi)
    assert bearing_to(p, (0.0, -1.0)) == pytest.approx(-math.pi / 2)
