"""Line-oriented JSON environment server for out-of-process bindings.

Protocol (one JSON object per line on stdin, one reply per line on stdout):

    {"op": "make_env", "config": {...}, "scenes": PATH, "instructions": PATH}
    {"op": "reset", "seed": 123}
    {"op": "step", "action": 0..3}
    {"op": "close"}

Replies are {"ok": true, ...} or {"ok": false, "error": NAME, "message": ...}.
"""

from __future__ import annotations

import json
import math
import random
import sys
from typing import Optional

from .dataset import load_records, load_scenes
from .errors import SceneNavError
from .evaluate import run_episode  # noqa: F401  (parity helpers live together)
from .language import tokenize
from .mapping import MapConfig, map_scene
from .programs import InstructionRecord
from .sim import Action, EnvConfig, reset, reward_scheme, step


def select_record(records, seed: int) -> InstructionRecord:
    """Uniform seeded episode selection, shared by rollout traces and serving."""
    rng = random.Random(seed)
    return records[rng.randrange(len(records))]


def env_config_from_doc(doc: dict) -> EnvConfig:
    kwargs = {}
    if "timeout_T" in doc:
        kwargs["timeout_T"] = int(doc["timeout_T"])
    for key in ("turn_delta", "move_step", "reach_radius", "large_reach_scale", "fov"):
        if key in doc:
            kwargs[key] = float(doc[key])
    if "reward" in doc:
        kwargs["reward_scheme"] = reward_scheme(doc["reward"])
    if "terminate_on_any_contact" in doc:
        kwargs["terminate_on_any_contact"] = bool(doc["terminate_on_any_contact"])
    return EnvConfig(**kwargs)


class EnvSession:
    """One live episode context over a loaded dataset."""

    def __init__(self, cfg: EnvConfig, scenes, records, lexicon_mode: str = "env"):
        if not records:
            raise SceneNavError("dataset contains no instruction records")
        self.cfg = cfg
        self.scenes = {s.id: s for s in scenes}
        self.records = records
        self.lexicon_mode = lexicon_mode
        self.map_config = MapConfig()
        self.state = None
        self.obs = None

    def reset(self, seed: int) -> dict:
        record = select_record(self.records, seed)
        ms = map_scene(self.scenes[record.scene_id], self.map_config)
        tokens = tuple(tokenize(record.text, self.lexicon_mode))
        self.state, self.obs = reset(self.cfg, ms, record, instruction_tokens=tokens)
        return {
            "observation": self.obs.to_doc(),
            "tokens": list(tokens),
            "scene_id": record.scene_id,
            "instruction": record.text,
        }

    def step(self, action: int) -> dict:
        if self.state is None:
            raise SceneNavError("step before reset")
        if not 0 <= int(action) < len(Action):
            raise SceneNavError(f"action {action} out of range 0..{len(Action) - 1}")
        self.state, self.obs, reward, done = step(self.state, Action(action), self.cfg)
        return {"observation": self.obs.to_doc(), "reward": reward, "done": done}


def handle_request(session: Optional[EnvSession], request: dict):
    """Returns (new_session, reply, should_exit)."""
    op = request.get("op")
    if op == "make_env":
        cfg = env_config_from_doc(request.get("config", {}))
        scenes, manifest = load_scenes(request["scenes"])
        records = load_records(request["instructions"])
        mode = request.get("config", {}).get("lexicon", None)
        if mode is None:
            mode = manifest.lexicon_mode if manifest is not None else "env"
        session = EnvSession(cfg, scenes, records, lexicon_mode=mode)
        return session, {"ok": True, "n_scenes": len(scenes),
                         "n_records": len(records),
                         "timeout_T": cfg.timeout_T,
                         "reward": cfg.reward_scheme.name}, False
    if op == "close":
        return None, {"ok": True}, True
    if session is None:
        raise SceneNavError(f"{op!r} before make_env")
    if op == "reset":
        reply = session.reset(int(request["seed"]))
        reply["ok"] = True
        return session, reply, False
    if op == "step":
        reply = session.step(request["action"])
        reply["ok"] = True
        return session, reply, False
    raise SceneNavError(f"unknown op {op!r}")


def serve(stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    session: Optional[EnvSession] = None
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            session, reply, should_exit = handle_request(session, request)
        except (SceneNavError, FileNotFoundError, KeyError, ValueError) as exc:
            reply = {"ok": False, "error": type(exc).__name__, "message": str(exc)}
            should_exit = False
        stdout.write(json.dumps(reply, sort_keys=True))
        stdout.write("\n")
        stdout.flush()
        if should_exit:
            return 0
    return 0
