from math import gcd

import pytest
from gmpy2 import mpq

from obtuse_billiards import hexlab
from obtuse_billiards.hexlab import (
    BranchRecord,
    ModulusCondition,
    build_dataset,
    closure_image,
    conjectured_values,
    hexagon_period,
    match_period,
    modulus_grid_search,
    pair_label,
    planted_dataset,
)
from obtuse_billiards.orbits import Status


def test_expressions_are_integral_and_positive():
    for x in range(2, 80):
        for y in range(1, x):
            if 3 * y > x and gcd(x, y) == 1:
                a_vals, c_vals = conjectured_values(x, y)
                assert all(v > 0 for v in a_vals | c_vals)


def test_class_examples():
    assert hexlab.hex_class(3, 2) == (0, 1)
    assert conjectured_values(3, 2) == ({18}, {6})
    assert hexlab.hex_class(4, 3) == (1, 1)
    assert conjectured_values(4, 3) == ({18, 24}, {8, 18})
    assert match_period(4, 3, 18) == "A|Ac" and match_period(4, 3, 24) == "A"
    assert match_period(4, 3, 9) == "neither"


def test_hexagon_periods_match_the_conjecture():
    r = hexagon_period(mpq(1, 7), 3, 2)
    assert r.status is Status.PERIODIC and r.period in {6, 18}
    seen = {hexagon_period(mpq(k, 11), 4, 3).period for k in range(-10, 11, 3)} - {None}
    assert seen and seen <= {8, 18, 24}
    with pytest.raises(ValueError):
        hexagon_period(0, 1, 2)


def test_hexagon_vertex_aim_is_singular():
    from obtuse_billiards.orbits import fold
    from obtuse_billiards.tessellation import ShapeId, get

    hexagon = get(ShapeId.HEXAGON)
    # start on the lower-right side, aimed at the vertex (0, 7/3)
    r = fold(hexagon, (1, 0), (-1, mpq(7, 3)))
    assert r.status is Status.SINGULAR


def test_pair_labels():
    assert pair_label(4, 3, [24]) == "A"
    assert pair_label(4, 3, [8, 18]) == "Ac"
    assert pair_label(4, 3, [18]) == "ambiguous"
    assert pair_label(4, 3, [8, 24]) == "mixed"
    assert pair_label(4, 3, [9]) == "neither"


def test_build_dataset():
    assert build_dataset(2) == []
    # (2, 1) already satisfies x/3 < y < x at x + y = 3
    assert {(r.x, r.y) for r in build_dataset(3, 2)} == {(2, 1)}
    recs = build_dataset(20, 4)
    assert recs == sorted(recs, key=lambda r: (r.x, r.y, r.period))
    assert all(r.matched_formula != "neither" for r in recs)
    assert len({(r.x, r.y, r.period) for r in recs}) == len(recs)
    assert len(hexlab.hexagon_pairs(40)) > 3 * len(hexlab.hexagon_pairs(20))


def test_planted_condition_is_recovered():
    pairs = hexlab.hexagon_pairs(40)
    planted = ModulusCondition(1, 1, 2)
    found = modulus_grid_search(planted_dataset(planted, pairs), class_of=lambda x, y: 0)
    assert planted in found
    other = ModulusCondition(2, -3, 7)
    found = modulus_grid_search(planted_dataset(other, pairs), (-4, 4), (2, 8), class_of=lambda x, y: 0)
    assert other in found
    assert ModulusCondition(1, 1, 2) not in found


def test_single_label_classes_are_ignored():
    labelled = {(4, 3): "A", (5, 4): "A"}
    assert modulus_grid_search(labelled) == []


def test_closure_map_arithmetic():
    assert closure_image(3, 2) == (33, 13)
    x2, y2 = closure_image(3, 2)
    assert 3 * y2 > x2 > y2 and gcd(x2, y2) == 1
    for x in range(3, 60, 3):
        for y in range(1, x):
            assert closure_image(x, y)[0] % 3 == 0


def test_closure_report():
    recs = build_dataset(24, 4)
    rep = hexlab.closure_map_check(recs, offsets_per_pair=4)
    for x, y, lab, x2, y2, lab2, note in rep.rows:
        assert x % 3 == 0 and lab == "A"
        if note:
            assert (x, y, x2, y2) in rep.out_of_range
    assert sum(rep.transitions.values()) + len(rep.out_of_range) == len(rep.rows)


def test_record_constructor():
    r = BranchRecord.of(4, 3, 24)
    assert r.congruence_class == (1, 1) and r.matched_formula == "A"
    assert r.expressions == ("A:6y+2x-2",)
