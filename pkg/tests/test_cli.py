import json
import xml.etree.ElementTree as ET

import pytest

from obtuse_billiards import atlas, hexlab
from obtuse_billiards.cli import main
from obtuse_billiards.fence import period_formula
from obtuse_billiards.render import render
from obtuse_billiards.tessellation import ShapeId


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_period_candidates(capsys):
    code, out = run(capsys, "period", "triangle", "1", "1")
    assert code == 0 and "[4, 10]" in out


def test_period_with_offset(capsys):
    code, out = run(capsys, "period", "triangle", "1", "1", "--offset", "1/2", "--json")
    data = json.loads(out)
    assert code == 0 and data["realized"] == 10 and data["agree"]
    code, out = run(capsys, "period", "kite", "0", "1", "--offset", "1/4", "--json")
    assert json.loads(out)["realized"] == 6
    code, out = run(capsys, "period", "triangle", "3", "1", "--offset", "1/5", "--json")
    data = json.loads(out)
    assert data["reduced_from"] == [3, 1] and data["realized"] == 8


def test_period_singular_offset_still_agrees(capsys):
    code, out = run(capsys, "period", "kite", "0", "1", "--offset", "1/2", "--json")
    data = json.loads(out)
    assert code == 0 and data["fold"]["status"] == "singular" and data["agree"]


@pytest.mark.parametrize("argv", [
    ("period", "square", "1", "1"),
    ("period", "triangle", "2", "2"),
    ("period", "triangle", "1", "1", "--offset", "abc"),
    ("period", "triangle", "1", "1", "--offset", "3/2"),
    ("period", "hexagon", "1", "2"),
    ("verify", "hexagon"),
    ("hexlab",),
    ("bogus",),
])
def test_bad_input_exit_code(capsys, argv):
    assert main(list(argv)) == 2


def test_verify_tiny(capsys):
    code, out = run(capsys, "verify", "triangle", "--max-sum", "3", "--offsets", "1")
    assert code == 0 and "0 mismatches" in out


def test_atlas_round_trip_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["atlas", "triangle", "--max-sum", "8", "--offsets", "2", "--out", str(a)]) == 0
    assert main(["atlas", "triangle", "--max-sum", "8", "--offsets", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = atlas.read(a)
    assert rows == atlas.loads_csv(atlas.dumps_csv(rows))
    for r in rows:
        assert r.period in period_formula(ShapeId.TRIANGLE120, r.x, r.y).candidates
        assert "/" in r.a
    j = tmp_path / "a.json"
    assert main(["atlas", "triangle", "--max-sum", "8", "--offsets", "2", "--format", "json", "--out", str(j)]) == 0
    assert atlas.read(j) == rows
    assert list(json.loads(j.read_text())[0]) == atlas.FIELDS


def test_empty_atlas_is_header_only(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["atlas", "rhombus", "--max-sum", "0", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# obtuse-billiards atlas schema v1") and len(lines) == 2


def test_atlas_write_failure_leaves_nothing(tmp_path):
    target = tmp_path / "missing" / "x.csv"
    assert main(["atlas", "triangle", "--max-sum", "3", "--offsets", "1", "--out", str(target)]) == 2
    assert not target.exists() and not (tmp_path / "missing").exists()


def test_hexagon_atlas_feeds_hexlab(tmp_path, capsys):
    data = tmp_path / "hex.csv"
    assert main(["atlas", "hexagon", "--max-sum", "16", "--offsets", "6", "--out", str(data)]) == 0
    records = atlas.records_from_rows(atlas.read(data))
    assert records == hexlab.build_dataset(16, 6)
    stem = tmp_path / "report"
    code, out = run(capsys, "hexlab", "--dataset", str(data), "--grid-search", "--closure", "--out", str(stem))
    assert code == 0
    assert "planted control (x+y mod 2) recovered: True" in out
    report = json.loads(stem.with_suffix(".json").read_text())
    assert report["counterexamples"] == [] and report["grid_search"]["planted_control_recovered"]


def test_hexlab_counterexample_exit_code(tmp_path, capsys):
    data = tmp_path / "bad.csv"
    rows = [atlas.AtlasRow("hexagon", 4, 3, "1/7", "0", 9, None, None, "1,1", "periodic")]
    atlas.write(rows, data)
    code, out = run(capsys, "hexlab", "--dataset", str(data))
    assert code == 4 and "(4,3) period 9" in out


def _svg(text):
    return ET.fromstring(text.split("\n", 2)[2])


def test_render_fold_square_orbit():
    text = render("triangle", 1, 1, "0", "fold")
    root = _svg(text)
    ns = "{http://www.w3.org/2000/svg}"
    fold = [g for g in root.iter(ns + "g") if g.get("id") == "fold"][0]
    line = fold.find(ns + "polyline").get("points").split()
    assert len(line) == 5 and line[0] == line[-1]  # four segments, closed
    assert "period=4" in text


def test_render_vertical_and_hexagon(tmp_path):
    assert "period=8" in render("triangle", 0, 1, "1/2", "fold")
    out = tmp_path / "h.svg"
    assert main(["render", "hexagon", "4", "3", "--offset", "1/7", "--mode", "fold", "--out", str(out)]) == 0
    assert "periodic period=" in out.read_text()
    _svg(render("kite", 2, 3, "1/5", "both"))


def test_render_is_deterministic():
    assert render("rhombus", 1, 2, "1/5") == render("rhombus", 1, 2, "1/5")
