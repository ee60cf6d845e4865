#!/usr/bin/env python3
"""Run a seeded generate-and-verify campaign and print summary statistics.

Examples:
    python3 scripts/fuzz_campaign.py --count 200
    python3 scripts/fuzz_campaign.py --universe tori --count 50 --seed 7
    python3 scripts/fuzz_campaign.py --universe both --count 100 --histogram
"""

import argparse
import sys
import time
from collections import Counter

from multipoint import herbert
from multipoint.generate import (
    CURVE_AMBIENTS,
    GenerationError,
    GeneratorConfig,
    generate,
)


def curve_config(seed):
    return GeneratorConfig(ambient=CURVE_AMBIENTS[seed % 3], seed=seed)


def tori_config(seed):
    return GeneratorConfig(
        universe="tori",
        ambient="t3-tori-catalog",
        components=(2, 3),
        seed=seed,
        with_cycle=seed % 2 == 0,
    )


def run_one(cfg):
    """(all_pass, rows, feature_count) for one generated scene."""
    scene = generate(cfg)
    if cfg.universe == "curves":
        curve = scene.multicurve("c")
        report = herbert.verify(curve, scene_id=f"seed{cfg.seed}")
        features = len(curve.certify().double_points)
    else:
        mesh = scene.mesh("f")
        targets = {n: scene.mesh_cycle(n, mesh) for n in scene.cycles}
        report = herbert.verify(
            mesh, targets=targets or None, scene_id=f"seed{cfg.seed}"
        )
        features = len(mesh.double_curves())
    return report.all_pass, len(report.rows), features


def campaign(universe, count, seed0, histogram):
    makers = {"curves": [curve_config], "tori": [tori_config]}.get(
        universe, [curve_config, tori_config]
    )
    failures = 0
    rows = 0
    feature_hist = Counter()
    t0 = time.perf_counter()
    for maker in makers:
        for i in range(count):
            cfg = maker(seed0 + i)
            try:
                passed, n_rows, features = run_one(cfg)
            except GenerationError as exc:
                print(f"seed {cfg.seed}: generation failed: {exc}")
                failures += 1
                continue
            rows += n_rows
            feature_hist[features] += 1
            if not passed:
                print(f"seed {cfg.seed} ({cfg.universe}): FAIL")
                failures += 1
    elapsed = time.perf_counter() - t0
    total = count * len(makers)
    print(
        f"{total - failures}/{total} scenes passed, {rows} identity rows, "
        f"{elapsed:.2f}s"
    )
    if histogram:
        kind = "double circles" if universe == "tori" else "double points"
        print(f"scenes by number of {kind}:")
        for k in sorted(feature_hist):
            print(f"  {k:3d}: {'#' * feature_hist[k]}")
    return failures


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--universe", choices=["curves", "tori", "both"], default="curves"
    )
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--histogram", action="store_true", help="print a feature-count histogram"
    )
    args = parser.parse_args(argv)
    return 1 if campaign(args.universe, args.count, args.seed, args.histogram) else 0


if __name__ == "__main__":
    sys.exit(main())
