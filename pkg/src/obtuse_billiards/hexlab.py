"""Hexagon experiments: period census, branch matching and the two searches.

Hexagon periods come from the folding oracle only.  The tessellation's
rotational symmetry means the edge count of an unfolding does not pin down
where it ends, so the unfolding shortcut is not trusted here.

Each congruence class (x mod 3, parity of x - y) carries an A-side and a
complementary side, each listing one or two integer expressions.  A pair is
labelled by the set of periods it realizes across offsets:

* ``A`` / ``Ac``: every period is an A-side (complement-side) value and at
  least one is not shared with the other side;
* ``ambiguous``: every period is a value both sides list;
* ``mixed``: periods exclusive to both sides occur (would refute the partition);
* ``neither``: some period matches no expression (a counterexample).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Optional

from .orbits import DirectionPair, OrbitResult, Status, fold_offset, pair
from .tessellation import ShapeId, get


def _e(cy, cx, c, name):
    # cy*y + (cx*x + c)/3
    return name, (cy, cx, c)


# Per class: (A-side expressions, complement-side expressions), first listed first.
HEX_EXPRESSIONS = {
    (0, 0): ([_e(3, 3, 0, "3y+x")], [_e(1, 1, 0, "y+x/3")]),
    (0, 1): ([_e(6, 6, 0, "6y+2x")], [_e(2, 2, 0, "2y+2x/3")]),
    (1, 0): ([_e(2, 2, -2, "2y+(2x-2)/3"), _e(3, 3, 6, "3y+x+2")],
             [_e(1, 1, 2, "y+(x+2)/3"), _e(2, 2, -2, "2y+(2x-2)/3")]),
    (1, 1): ([_e(4, 4, 2, "4y+(4x+2)/3"), _e(6, 6, -6, "6y+2x-2")],
             [_e(2, 2, -2, "2y+(2x-2)/3"), _e(4, 4, 2, "4y+(4x+2)/3")]),
    (2, 0): ([_e(2, 2, 2, "2y+(2x+2)/3"), _e(3, 3, -6, "3y+x-2")],
             [_e(1, 1, -2, "y+(x-2)/3"), _e(2, 2, 2, "2y+(2x+2)/3")]),
    (2, 1): ([_e(4, 4, -2, "4y+(4x-2)/3"), _e(6, 6, 6, "6y+2x+2")],
             [_e(2, 2, 2, "2y+(2x+2)/3"), _e(4, 4, -2, "4y+(4x-2)/3")]),
}


def hex_class(x: int, y: int) -> tuple:
    return x % 3, (x - y) % 2


def _value(expr, x, y) -> int:
    cy, cx, c = expr
    v = Fraction(cy * y) + Fraction(cx * x + c, 3)
    assert v.denominator == 1, (expr, x, y)
    return int(v)


def conjectured_values(x: int, y: int) -> tuple:
    """``(A-side values, complement-side values)`` as sets."""
    a_side, c_side = HEX_EXPRESSIONS[hex_class(x, y)]
    return ({_value(e, x, y) for _, e in a_side}, {_value(e, x, y) for _, e in c_side})


def match_period(x: int, y: int, period: int) -> str:
    a_vals, c_vals = conjectured_values(x, y)
    if period in a_vals and period in c_vals:
        return "A|Ac"
    if period in a_vals:
        return "A"
    if period in c_vals:
        return "Ac"
    return "neither"


def matching_expressions(x: int, y: int, period: int) -> tuple:
    a_side, c_side = HEX_EXPRESSIONS[hex_class(x, y)]
    names = [f"A:{n}" for n, e in a_side if _value(e, x, y) == period]
    names += [f"Ac:{n}" for n, e in c_side if _value(e, x, y) == period]
    return tuple(names)


def pair_label(x: int, y: int, periods: Iterable[int]) -> str:
    tags = {match_period(x, y, p) for p in periods}
    if not tags:
        return "none"
    if "neither" in tags:
        return "neither"
    if {"A", "Ac"} <= tags:
        return "mixed"
    if "A" in tags:
        return "A"
    if "Ac" in tags:
        return "Ac"
    return "ambiguous"


@dataclass(frozen=True)
class BranchRecord:
    x: int
    y: int
    period: int
    congruence_class: tuple
    matched_formula: str  # "A", "Ac", "A|Ac" or "neither"
    expressions: tuple = ()
    hits: int = 1  # offsets that produced this period

    @classmethod
    def of(cls, x: int, y: int, period: int, hits: int = 1) -> "BranchRecord":
        return cls(x, y, period, hex_class(x, y), match_period(x, y, period),
                   matching_expressions(x, y, period), hits)


@dataclass(frozen=True)
class ModulusCondition:
    c1: int
    c2: int
    c3: int

    def __call__(self, x: int, y: int) -> int:
        return (self.c1 * x + self.c2 * y) % self.c3


def hexagon_period(a, x, y=None, max_bounces: Optional[int] = None) -> OrbitResult:
    d = pair(x, y)
    if not d.hexagon_range:
        raise ValueError(f"({d.x}, {d.y}) is outside x/3 < y < x")
    return fold_offset(get(ShapeId.HEXAGON), a, d, max_bounces)


def hexagon_pairs(max_sum: int) -> list:
    out = []
    for s in range(2, max_sum + 1):
        for y in range(1, s):
            x = s - y
            if 3 * y > x > y and gcd(x, y) == 1:
                out.append((x, y))
    return sorted(out)


def _census(args) -> tuple:
    from .sweep import offsets

    x, y, k, seed = args
    d = DirectionPair(x, y)
    counts = Counter()
    truncated = 0
    for a in offsets(ShapeId.HEXAGON, d, k, seed):
        r = hexagon_period(a, d)
        if r.status is Status.TRUNCATED:
            r = hexagon_period(a, d, max_bounces=20 * (8 * y + 4 * x) + 1000)
        if r.status is Status.PERIODIC:
            counts[r.period] += 1
        elif r.status is Status.TRUNCATED:
            truncated += 1
    return x, y, counts, truncated


def build_dataset(max_sum: int, offsets_per_pair: int = 6, seed: int = 0, jobs: int = 1) -> list:
    """One record per distinct (x, y, period), sorted by (x, y, period)."""
    args = [(x, y, offsets_per_pair, seed) for x, y in hexagon_pairs(max_sum)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_census, args, chunksize=2))
    else:
        results = [_census(a) for a in args]
    records = []
    for x, y, counts, _ in results:
        for p in sorted(counts):
            records.append(BranchRecord.of(x, y, p, counts[p]))
    return records


def realized_sets(records: Iterable[BranchRecord]) -> dict:
    out = defaultdict(set)
    for r in records:
        out[(r.x, r.y)].add(r.period)
    return dict(sorted(out.items()))


def pair_labels(records: Iterable[BranchRecord]) -> dict:
    return {xy: pair_label(*xy, ps) for xy, ps in realized_sets(records).items()}


@dataclass
class CensusSummary:
    pairs: int
    records: int
    labels: Counter
    counterexamples: list  # (x, y, period) matching nothing
    many_valued: list  # pairs with more than two distinct periods

    @property
    def replicated(self) -> bool:
        return not self.counterexamples


def summarize(records: list) -> CensusSummary:
    sets = realized_sets(records)
    labels = Counter(pair_label(*xy, ps) for xy, ps in sets.items())
    bad = [(r.x, r.y, r.period) for r in records if r.matched_formula == "neither"]
    many = [xy for xy, ps in sets.items() if len(ps) > 2]
    return CensusSummary(len(sets), len(records), labels, bad, many)


def modulus_grid_search(
    labelled: dict,
    c_range: tuple = (-36, 36),
    c3_range: tuple = (2, 36),
    class_of: Callable = hex_class,
) -> list:
    """Conditions whose residue determines the label inside every class.

    ``labelled`` maps (x, y) to a label; only the labels ``"A"`` and ``"Ac"``
    take part.  A class contributes only when both labels occur in it, and a
    condition survives when, in every contributing class, no residue carries
    both labels.  Conditions are returned sorted by (c3, c1, c2).
    """
    groups = defaultdict(list)
    for (x, y), lab in labelled.items():
        if lab in ("A", "Ac"):
            groups[class_of(x, y)].append((x, y, lab == "A"))
    groups = {k: v for k, v in groups.items() if len({s for _, _, s in v}) == 2}
    if not groups:
        return []
    lo, hi = c_range
    found = []
    for c3 in range(c3_range[0], c3_range[1] + 1):
        for c1 in range(lo, hi + 1):
            for c2 in range(lo, hi + 1):
                if _separates(groups, c1, c2, c3):
                    found.append(ModulusCondition(c1, c2, c3))
    return found


def _separates(groups, c1, c2, c3) -> bool:
    for members in groups.values():
        seen = {}
        for x, y, side in members:
            r = (c1 * x + c2 * y) % c3
            if seen.setdefault(r, side) != side:
                return False
    return True


def planted_dataset(condition: ModulusCondition, pairs: Iterable[tuple]) -> dict:
    """Labels ``A`` where the planted residue is 0, ``Ac`` elsewhere."""
    return {(x, y): "A" if condition(x, y) == 0 else "Ac" for x, y in pairs}


def closure_image(x: int, y: int) -> tuple:
    return 27 * y - 7 * x, 11 * y - 3 * x


@dataclass
class ClosureReport:
    rows: list = field(default_factory=list)  # (x, y, label, x', y', label', note)
    transitions: Counter = field(default_factory=Counter)  # ((i,j), (i',j')) -> count
    out_of_range: list = field(default_factory=list)
    image_not_in_A: list = field(default_factory=list)

    def table(self) -> dict:
        out = defaultdict(dict)
        for (src, dst), n in sorted(self.transitions.items()):
            out[src][dst] = n
        return dict(out)


def closure_map_check(records: list, offsets_per_pair: int = 6, seed: int = 0,
                      only_A: bool = True) -> ClosureReport:
    """Follow ``(x, y) -> (27y - 7x, 11y - 3x)`` for the pairs with 3 | x.

    Images outside the dataset are probed on demand.  With ``only_A`` the
    sources are restricted to pairs labelled ``A``; the report records
    whether each image is itself an A-pair.
    """
    labels = pair_labels(records)
    rep = ClosureReport()
    for (x, y), lab in labels.items():
        if x % 3 or (only_A and lab != "A"):
            continue
        x2, y2 = closure_image(x, y)
        if not (3 * y2 > x2 > y2 > 0) or gcd(x2, y2) != 1:
            rep.out_of_range.append((x, y, x2, y2))
            rep.rows.append((x, y, lab, x2, y2, None, "out of range"))
            continue
        if (x2, y2) in labels:
            lab2 = labels[(x2, y2)]
        else:
            _, _, counts, _ = _census((x2, y2, offsets_per_pair, seed))
            lab2 = pair_label(x2, y2, counts)
        rep.transitions[(hex_class(x, y), hex_class(x2, y2))] += 1
        if lab2 != "A":
            rep.image_not_in_A.append((x, y, x2, y2, lab2))
        rep.rows.append((x, y, lab, x2, y2, lab2, ""))
    return rep


__all__ = [
    "BranchRecord",
    "CensusSummary",
    "ClosureReport",
    "HEX_EXPRESSIONS",
    "ModulusCondition",
    "build_dataset",
    "closure_image",
    "closure_map_check",
    "conjectured_values",
    "hex_class",
    "hexagon_pairs",
    "hexagon_period",
    "match_period",
    "modulus_grid_search",
    "pair_label",
    "pair_labels",
    "planted_dataset",
    "realized_sets",
    "summarize",
]
