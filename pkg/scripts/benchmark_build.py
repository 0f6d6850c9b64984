#!/usr/bin/env python3
"""Time a full-scale dataset build and report records/second."""

import argparse
import time

from scenenav.dataset import DatasetManifest, build_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-scenes", type=int, default=14_000)
    ap.add_argument("--objects", type=int, nargs="+", default=[3])
    args = ap.parse_args()

    start = time.perf_counter()
    ds = build_dataset(DatasetManifest(seed=args.seed, n_scenes=args.n_scenes,
                                       object_counts=tuple(args.objects)))
    elapsed = time.perf_counter() - start
    print(f"{len(ds.scenes)} scenes, {len(ds.records)} records in {elapsed:.1f}s "
          f"({len(ds.records) / elapsed:.0f} records/s)")


if __name__ == "__main__":
    main()
