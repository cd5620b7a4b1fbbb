#!/usr/bin/env python3
"""Hexagon period census with the modulus search and the closure map.

Writes STEM.csv (atlas rows), STEM.txt and STEM.json (report).  Pass a large
--max-sum (around 120 reaches roughly 1000 pairs) for longer runs.
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from obtuse_billiards import atlas
from obtuse_billiards.cli import main as cli_main
from obtuse_billiards.sweep import atlas_rows
from obtuse_billiards.tessellation import ShapeId


@dataclass
class CensusConfig:
    max_sum: int = 60
    offsets: int = 6
    seed: int = 0
    jobs: int = 1
    out: str = "results/hexagon"


def main(cfg: CensusConfig) -> int:
    stem = Path(cfg.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    rows = [atlas.AtlasRow.from_probe(p)
            for p in atlas_rows(ShapeId.HEXAGON, cfg.max_sum, cfg.offsets, cfg.seed, cfg.jobs)]
    data = atlas.write(rows, stem.with_suffix(".csv"))
    return cli_main(["--seed", str(cfg.seed), "hexlab", "--dataset", str(data), "--offsets",
                     str(cfg.offsets), "--grid-search", "--closure", "--out", str(stem)])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for f, v in CensusConfig().__dict__.items():
        ap.add_argument("--" + f.replace("_", "-"), type=type(v), default=v)
    raise SystemExit(main(CensusConfig(**vars(ap.parse_args()))))
