"""Command-line surface: dataset pipeline, validation, rollouts, curriculum."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from typing import List, Optional, Tuple

from . import __version__
from .curriculum import CurriculumStage, default_curriculum, stage_sampler
from .dataset import (
    DatasetManifest,
    build_dataset,
    generate_instructions,
    generate_scenes,
    load_records,
    load_scenes,
    save_records,
    save_scenes,
    validate_dataset,
)
from .errors import SceneNavError
from .evaluate import EpisodeResult, EvalReport, path_is_clear, run_episode
from .language import write_vocabulary
from .mapping import MapConfig, map_scene
from .programs import (
    InstructionKind,
    enumerate_complex_space,
    fully_specified_count,
)
from .scene import SpatialRelation
from .serve import select_record, serve
from .sim import EnvConfig, OraclePolicy, Outcome, RandomPolicy, reward_scheme

log = logging.getLogger("scenenav")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2


def _add_seed(p, default=0):
    p.add_argument("--seed", type=int, default=default,
                   help="64-bit unsigned master seed")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenenav",
        description="Scene-graph navigation supervision toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-scenes", help="generate scenes or import CLEVR files")
    _add_seed(p)
    p.add_argument("--n-scenes", type=int, default=100)
    p.add_argument("--objects", type=int, nargs="+", default=[3],
                   help="object counts cycled across scenes")
    p.add_argument("--import-clevr", metavar="PATH",
                   help="import from a CLEVR scenes JSON instead of generating")
    p.add_argument("--sample", choices=["first", "random"], default="first",
                   help="how to subsample imported scenes down to --n-scenes")
    p.add_argument("--lexicon", choices=["scene", "env"], default="env")
    p.add_argument("--simple", type=int, default=5)
    p.add_argument("--complex", type=int, default=5)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gen-instructions", help="sample instructions for a scene file")
    _add_seed(p)
    p.add_argument("--scenes", required=True)
    p.add_argument("--lexicon", choices=["scene", "env"], default=None,
                   help="override the lexicon recorded in the scene file")
    p.add_argument("--simple", type=int, default=None)
    p.add_argument("--complex", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="re-run scene and uniqueness oracles on files")
    p.add_argument("--scenes", required=True)
    p.add_argument("--instructions", required=True)

    p = sub.add_parser("rollout", help="run a scripted policy and report accuracy")
    _add_seed(p)
    p.add_argument("--scenes", required=True)
    p.add_argument("--instructions", required=True)
    p.add_argument("--policy", choices=["oracle", "random"], default="oracle")
    p.add_argument("-n", "--episodes", type=int, default=300)
    p.add_argument("--reward", choices=["sparse", "dense"], default="sparse")
    p.add_argument("--timeout", type=int, default=30)
    p.add_argument("--kind", choices=["simple", "complex"], default=None)
    p.add_argument("--obstacle-free", action="store_true",
                   help="only count episodes with a clear straight path")
    p.add_argument("--lexicon", choices=["scene", "env"], default="env")
    p.add_argument("--trace-out", help="write a per-step JSONL trace")
    p.add_argument("--out", help="write the report JSON here (default stdout)")

    p = sub.add_parser("curriculum", help="run stage-wise rollouts")
    _add_seed(p)
    p.add_argument("--scenes", required=True)
    p.add_argument("--instructions", required=True)
    p.add_argument("--stages", help="JSON file: list of [n_objects, proportion, budget]")
    p.add_argument("--policy", choices=["oracle", "random"], default="oracle")
    p.add_argument("--episodes-per-stage", type=int, default=100)
    p.add_argument("--reward", choices=["sparse", "dense"], default="sparse")
    p.add_argument("--lexicon", choices=["scene", "env"], default="env")
    p.add_argument("--out", help="write per-stage reports JSON here (default stdout)")

    p = sub.add_parser("enumerate", help="print instruction-space counts")
    p.add_argument("--relations", nargs="+", default=None,
                   choices=[r.value for r in SpatialRelation])

    p = sub.add_parser("vocab", help="write the token vocabulary sidecar")
    p.add_argument("--lexicon", choices=["scene", "env"], default="env")
    p.add_argument("--out", required=True)

    sub.add_parser("serve", help="serve episodes over stdin/stdout JSON lines")

    return parser


def _cmd_gen_scenes(args) -> int:
    manifest = DatasetManifest(seed=args.seed, n_scenes=args.n_scenes,
                               simple_per_scene=args.simple,
                               complex_per_scene=args.complex,
                               lexicon_mode=args.lexicon,
                               object_counts=tuple(args.objects))
    if args.import_clevr:
        scenes, _ = load_scenes(args.import_clevr)
        if args.sample == "first":
            scenes = scenes[:args.n_scenes]
        else:
            rng = random.Random(args.seed)
            scenes = rng.sample(scenes, min(args.n_scenes, len(scenes)))
        import dataclasses
        scenes = [dataclasses.replace(s, id=i) for i, s in enumerate(scenes)]
    else:
        scenes = generate_scenes(manifest)
    save_scenes(scenes, args.out, manifest=manifest)
    print(f"wrote {len(scenes)} scenes to {args.out}")
    return EXIT_OK


def _cmd_gen_instructions(args) -> int:
    scenes, manifest = load_scenes(args.scenes)
    if manifest is None:
        manifest = DatasetManifest(seed=args.seed, n_scenes=len(scenes))
    import dataclasses
    overrides = {"seed": args.seed}
    if args.lexicon is not None:
        overrides["lexicon_mode"] = args.lexicon
    if args.simple is not None:
        overrides["simple_per_scene"] = args.simple
    if args.complex is not None:
        overrides["complex_per_scene"] = args.complex
    manifest = dataclasses.replace(manifest, **overrides)
    records = generate_instructions(scenes, manifest)
    save_records(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    scenes, _ = load_scenes(args.scenes)
    records = load_records(args.instructions)
    failures = validate_dataset(scenes, records)
    if failures:
        for msg in failures:
            print(f"FAIL: {msg}", file=sys.stderr)
        print(f"validation failed: {len(failures)} problem(s)", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"ok: {len(scenes)} scenes, {len(records)} records verified")
    return EXIT_OK


def _make_policy(name: str, seed: int):
    if name == "oracle":
        return OraclePolicy()
    return RandomPolicy(seed)


def _aggregate(results: List[Tuple[InstructionKind, EpisodeResult]]) -> EvalReport:
    hits = {}
    totals = {}
    outcome_counts = {o.value: 0 for o in Outcome}
    returns = []
    for kind, res in results:
        totals[kind] = totals.get(kind, 0) + 1
        if res.outcome is Outcome.REACHED_TARGET:
            hits[kind] = hits.get(kind, 0) + 1
        outcome_counts[res.outcome.value] += 1
        returns.append(res.total_reward)

    def acc(kind):
        return hits.get(kind, 0) / totals[kind] if totals.get(kind) else None

    return EvalReport(episodes=len(results),
                      simple_accuracy=acc(InstructionKind.SIMPLE),
                      complex_accuracy=acc(InstructionKind.COMPLEX),
                      mean_return=sum(returns) / len(returns) if returns else 0.0,
                      outcome_counts=outcome_counts)


def _cmd_rollout(args) -> int:
    scenes, _ = load_scenes(args.scenes)
    records = load_records(args.instructions)
    by_id = {s.id: s for s in scenes}
    cfg = EnvConfig(timeout_T=args.timeout, reward_scheme=reward_scheme(args.reward))
    map_config = MapConfig()
    master = random.Random(args.seed)
    kind = InstructionKind(args.kind) if args.kind else None

    results = []
    trace_lines = []
    mapped_cache = {}
    attempts = 0
    max_attempts = max(1000, 200 * args.episodes)
    while len(results) < args.episodes:
        attempts += 1
        if attempts > max_attempts:
            print("error: could not find enough qualifying episodes", file=sys.stderr)
            return EXIT_VALIDATION
        # 53-bit seeds survive a float64 JSON round-trip, so traces replay
        # exactly from any client
        reset_seed = master.getrandbits(53)
        policy_seed = master.getrandbits(53)
        record = select_record(records, reset_seed)
        if kind is not None and record.kind is not kind:
            continue
        ms = mapped_cache.get(record.scene_id)
        if ms is None:
            ms = map_scene(by_id[record.scene_id], map_config)
            mapped_cache[record.scene_id] = ms
        if args.obstacle_free and not path_is_clear(ms, record.target_id, cfg):
            continue
        policy = _make_policy(args.policy, policy_seed)
        res = run_episode(policy, cfg, ms, record, args.lexicon,
                          keep_step_log=args.trace_out is not None)
        results.append((record.kind, res))
        if args.trace_out is not None:
            trace_lines.append({
                "episode": len(results) - 1,
                "reset_seed": reset_seed,
                "steps": [{"action": a, "reward": r, "done": d}
                          for a, r, d in res.step_log],
            })

    report = _aggregate(results)
    doc = json.dumps(report.to_doc(), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    if args.trace_out is not None:
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            for line in trace_lines:
                fh.write(json.dumps(line, sort_keys=True) + "\n")
    return EXIT_OK


def _load_stages(path: Optional[str]) -> List[CurriculumStage]:
    if path is None:
        return default_curriculum()
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return [CurriculumStage(n_objects=s[0], complex_proportion=s[1],
                            episode_budget=s[2] if len(s) > 2 else 10_000)
            for s in raw]


def _cmd_curriculum(args) -> int:
    scenes, _ = load_scenes(args.scenes)
    records = load_records(args.instructions)
    cfg = EnvConfig(reward_scheme=reward_scheme(args.reward))
    map_config = MapConfig()
    by_id = {s.id: s for s in scenes}
    stages = _load_stages(args.stages)
    reports = []
    mapped_cache = {}
    for idx, stage in enumerate(stages):
        sampler = stage_sampler(stage, scenes, records, seed=args.seed + idx)
        policy = _make_policy(args.policy, args.seed + idx)
        results = []
        for _, record in zip(range(args.episodes_per_stage), sampler):
            ms = mapped_cache.get(record.scene_id)
            if ms is None:
                ms = map_scene(by_id[record.scene_id], map_config)
                mapped_cache[record.scene_id] = ms
            results.append((record.kind,
                            run_episode(policy, cfg, ms, record, args.lexicon)))
        report = _aggregate(results)
        reports.append({
            "stage": idx + 1,
            "n_objects": stage.n_objects,
            "complex_proportion": stage.complex_proportion,
            "report": report.to_doc(),
        })
    doc = json.dumps(reports, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    if args.relations:
        relations = tuple(SpatialRelation(r) for r in args.relations)
    else:
        relations = tuple(SpatialRelation)
    print(f"fully-specified object types: {fully_specified_count()}")
    print(f"spatial relations: {len(relations)}")
    print(f"complex instructions: {enumerate_complex_space(relations)}")
    return EXIT_OK


def _cmd_vocab(args) -> int:
    write_vocabulary(args.out, args.lexicon)
    print(f"wrote vocabulary to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen-scenes": _cmd_gen_scenes,
        "gen-instructions": _cmd_gen_instructions,
        "validate": _cmd_validate,
        "rollout": _cmd_rollout,
        "curriculum": _cmd_curriculum,
        "enumerate": _cmd_enumerate,
        "vocab": _cmd_vocab,
        "serve": lambda a: serve(),
    }
    try:
        return handlers[args.command](args)
    except (SceneNavError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
