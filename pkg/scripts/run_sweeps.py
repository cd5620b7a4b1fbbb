#!/usr/bin/env python3
"""Formula/oracle sweeps on the triangle, rhombus and kite."""

import argparse
import time
from dataclasses import dataclass

from obtuse_billiards.sweep import verify
from obtuse_billiards.tessellation import ShapeId


@dataclass
class SweepConfig:
    triangle_max_sum: int = 40
    other_max_sum: int = 30
    offsets: int = 8
    seed: int = 0
    jobs: int = 1


def main(cfg: SweepConfig) -> int:
    failures = 0
    for shape, n in ((ShapeId.TRIANGLE120, cfg.triangle_max_sum),
                     (ShapeId.RHOMBUS60, cfg.other_max_sum),
                     (ShapeId.KITE, cfg.other_max_sum)):
        t = time.perf_counter()
        rep = verify(shape, n, cfg.offsets, cfg.seed, cfg.jobs)
        print(f"{rep.summary()}  [{time.perf_counter() - t:.1f}s]")
        for m in rep.mismatches[:10]:
            print("   ", m)
        failures += len(rep.mismatches)
    return 1 if failures else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for f, v in SweepConfig().__dict__.items():
        ap.add_argument("--" + f.replace("_", "-"), type=int, default=v)
    raise SystemExit(main(SweepConfig(**vars(ap.parse_args()))))
