#!/usr/bin/env python3
"""Render a fixed set of orbit figures as SVG."""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from obtuse_billiards.render import render

FIGURES = [
    ("triangle", 1, 1, "0", "both"),  # period 4
    ("triangle", 1, 1, "1/2", "both"),  # period 10
    ("triangle", 0, 1, "1/2", "both"),  # period 8
    ("triangle", 3, 5, "1/4", "unfold"),
    ("rhombus", 2, 3, "1/5", "both"),
    ("kite", 0, 1, "1/4", "both"),
    ("kite", 3, 5, "1/4", "fold"),
    ("hexagon", 4, 3, "1/7", "fold"),
]


@dataclass
class FigureConfig:
    out_dir: str = "figures"
    figures: list = field(default_factory=lambda: list(FIGURES))


def main(cfg: FigureConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for shape, x, y, a, mode in cfg.figures:
        path = out / f"{shape}_{x}_{y}_{a.replace('/', 'o').replace('-', 'm')}_{mode}.svg"
        path.write_text(render(shape, x, y, a, mode))
        print(path)
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="figures")
    raise SystemExit(main(FigureConfig(out_dir=ap.parse_args().out_dir)))
