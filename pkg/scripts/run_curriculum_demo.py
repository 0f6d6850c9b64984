#!/usr/bin/env python3
"""End-to-end demo: build a dataset, then roll the oracle and a random policy
through every curriculum stage and print a per-stage accuracy table."""

import argparse

from scenenav.curriculum import default_curriculum, stage_sampler
from scenenav.dataset import DatasetManifest, build_dataset
from scenenav.evaluate import run_episode
from scenenav.mapping import map_scene
from scenenav.sim import EnvConfig, OraclePolicy, Outcome, RandomPolicy


def stage_accuracy(policy, stage, dataset, cfg, episodes, seed):
    by_id = dataset.scenes_by_id()
    sampler = stage_sampler(stage, dataset.scenes, dataset.records, seed)
    mapped = {}
    hits = 0
    for _, record in zip(range(episodes), sampler):
        ms = mapped.setdefault(record.scene_id, map_scene(by_id[record.scene_id]))
        res = run_episode(policy, cfg, ms, record)
        hits += res.outcome is Outcome.REACHED_TARGET
    return hits / episodes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-scenes", type=int, default=200)
    ap.add_argument("--episodes-per-stage", type=int, default=100)
    args = ap.parse_args()

    dataset = build_dataset(DatasetManifest(seed=args.seed, n_scenes=args.n_scenes,
                                            object_counts=(3, 5)))
    cfg = EnvConfig()
    print(f"{'stage':>5} {'objects':>7} {'complex%':>8} {'oracle':>7} {'random':>7}")
    for i, stage in enumerate(default_curriculum(), start=1):
        oracle = stage_accuracy(OraclePolicy(), stage, dataset, cfg,
                                args.episodes_per_stage, args.seed + i)
        rand = stage_accuracy(RandomPolicy(args.seed + i), stage, dataset, cfg,
                              args.episodes_per_stage, args.seed + i)
        print(f"{i:>5} {stage.n_objects:>7} {stage.complex_proportion:>8.2f} "
              f"{oracle:>7.3f} {rand:>7.3f}")


if __name__ == "__main__":
    main()
