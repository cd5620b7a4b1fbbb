"""Command-line frontend.

Exit codes: 0 ok, 1 verification mismatch, 2 bad input, 3 engine
disagreement, 4 conjecture counterexample.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import atlas, fence, hexlab, sweep
from .geometry import rat, rat_str
from .orbits import Status, detect_period_unfolding, fold_offset, reduce_angle
from .render import render
from .tessellation import ShapeId, get

log = logging.getLogger("obtuse_billiards")

OK, MISMATCH, BAD_INPUT, DISAGREE, COUNTEREXAMPLE = 0, 1, 2, 3, 4


class BadInput(Exception):
    pass


def _shape(name: str) -> ShapeId:
    try:
        return ShapeId.parse(name)
    except ValueError as e:
        raise BadInput(str(e)) from None


def _offset(text):
    if text is None:
        return None
    try:
        return rat(text)
    except (ValueError, TypeError):
        raise BadInput(f"offset {text!r} is not a rational p/q") from None


def _direction(shape: ShapeId, x: int, y: int):
    """Hexagon pairs are taken as given; the others are re-based into [60, 90]."""
    try:
        if shape is ShapeId.HEXAGON:
            d = sweep.pair(x, y)
            if not d.hexagon_range:
                raise ValueError("hexagon directions need x/3 < y < x")
            return d
        return reduce_angle(x, y)[0]
    except ValueError as e:
        raise BadInput(str(e)) from None


def cmd_period(args) -> int:
    shape = _shape(args.shape)
    d = _direction(shape, args.x, args.y)
    out = {"shape": shape.value, "x": d.x, "y": d.y}
    if (d.x, d.y) != (args.x, args.y):
        out["reduced_from"] = [args.x, args.y]
    if shape is ShapeId.HEXAGON:
        a_vals, c_vals = hexlab.conjectured_values(d.x, d.y)
        out["class"] = list(hexlab.hex_class(d.x, d.y))
        out["candidates"] = {"A": sorted(a_vals), "Ac": sorted(c_vals)}
    else:
        pred = fence.period_formula(shape, d.x, d.y)
        out["branch"] = list(pred.branch)
        out["candidates"] = list(pred.candidates)
    code = OK
    a = _offset(args.offset)
    if a is not None:
        if not -1 < a < 1:
            raise BadInput("offset must lie in (-1, 1)")
        tess = get(shape)
        folded = fold_offset(tess, a, d)
        out["offset"] = rat_str(a)
        out["fold"] = {"status": folded.status.value, "period": folded.period}
        if shape is ShapeId.HEXAGON:
            out["matched"] = (hexlab.match_period(d.x, d.y, folded.period)
                              if folded.periodic else None)
        else:
            unfolded = detect_period_unfolding(tess, a, d)
            out["unfold"] = {
                "status": unfolded.status.value,
                "period": unfolded.period,
                "T": None if unfolded.T is None else rat_str(unfolded.T),
                "N": unfolded.N,
            }
            agree = (folded.status is unfolded.status
                     and folded.period == unfolded.period)
            out["agree"] = agree
            if not agree:
                code = DISAGREE
        out["realized"] = folded.period
    if args.json:
        print(json.dumps(out))
    else:
        print(f"{out['shape']} ({out['x']},{out['y']}) candidates {out['candidates']}")
        if a is not None:
            line = f"offset {out['offset']}: fold {out['fold']['status']} period {out['fold']['period']}"
            if "unfold" in out:
                line += (f"; unfold {out['unfold']['status']} period {out['unfold']['period']}"
                         f"; engines {'agree' if out['agree'] else 'DISAGREE'}")
            print(line)
    return code


def cmd_verify(args) -> int:
    shape = _shape(args.shape)
    if shape is ShapeId.HEXAGON:
        raise BadInput("verify covers the triangle, rhombus and kite; use hexlab for the hexagon")
    rep = sweep.verify(shape, args.max_sum, args.offsets, args.seed, args.jobs)
    print(rep.summary())
    if rep.mismatches:
        print("first mismatch:", rep.mismatches[0])
        disagree = any("engines disagree" in m for m in rep.mismatches)
        return DISAGREE if disagree else MISMATCH
    print("0 mismatches")
    return OK


def cmd_atlas(args) -> int:
    shape = _shape(args.shape)
    probes = sweep.atlas_rows(shape, args.max_sum, args.offsets, args.seed, args.jobs)
    rows = [atlas.AtlasRow.from_probe(p) for p in probes]
    out = Path(args.out) if args.out else Path(f"atlas_{shape.value}.{args.format}")
    try:
        atlas.write(rows, out, args.format)
    except OSError as e:
        print(f"error writing {out}: {e}", file=sys.stderr)
        return BAD_INPUT
    log.info("wrote %d rows to %s", len(rows), out)
    return OK


def _hexlab_report(records, args) -> tuple:
    summary = hexlab.summarize(records)
    labels = hexlab.pair_labels(records)
    lines = [
        f"hexagon census: {summary.pairs} pairs, {summary.records} (pair, period) records",
        "pair labels: " + ", ".join(f"{k}={v}" for k, v in sorted(summary.labels.items())),
    ]
    data = {
        "pairs": summary.pairs,
        "records": [
            {"x": r.x, "y": r.y, "period": r.period, "class": list(r.congruence_class),
             "matched_formula": r.matched_formula, "expressions": list(r.expressions),
             "hits": r.hits}
            for r in records
        ],
        "labels": {f"{x},{y}": lab for (x, y), lab in labels.items()},
        "counterexamples": [list(c) for c in summary.counterexamples],
        "more_than_two_periods": [list(p) for p in summary.many_valued],
    }
    if summary.counterexamples:
        lines.append("periods matching neither expression:")
        lines += [f"  ({x},{y}) period {p}" for x, y, p in summary.counterexamples]
    else:
        lines.append("every observed period matches a conjectured expression")
    if args.grid_search:
        found = hexlab.modulus_grid_search(labels)
        control = hexlab.ModulusCondition(1, 1, 2)
        planted = hexlab.modulus_grid_search(
            hexlab.planted_dataset(control, labels), class_of=lambda x, y: 0)
        recovered = control in planted
        data["grid_search"] = {"found": [[c.c1, c.c2, c.c3] for c in found],
                               "planted_control_recovered": recovered}
        if found:
            lines.append(f"{len(found)} separating modulus conditions, e.g. "
                         + ", ".join(str((c.c1, c.c2, c.c3)) for c in found[:5]))
        else:
            lines.append("no separating modulus condition found")
        lines.append(f"planted control (x+y mod 2) recovered: {recovered}")
    if args.closure:
        rep = hexlab.closure_map_check(records, args.offsets, args.seed)
        table = rep.table()
        data["closure"] = {
            "transitions": {f"{s}": {f"{t}": n for t, n in row.items()} for s, row in table.items()},
            "out_of_range": [list(r) for r in rep.out_of_range],
            "image_not_in_A": [list(r) for r in rep.image_not_in_A],
        }
        lines.append("closure map (27y-7x, 11y-3x) transitions over A-pairs with 3|x:")
        for s, row in table.items():
            lines.append(f"  {s} -> " + ", ".join(f"{t}: {n}" for t, n in row.items()))
        lines.append(f"  images out of range: {len(rep.out_of_range)}; "
                     f"images not labelled A: {len(rep.image_not_in_A)}")
    return summary, "\n".join(lines) + "\n", data


def cmd_hexlab(args) -> int:
    if args.dataset:
        try:
            rows = atlas.read(args.dataset)
        except (OSError, ValueError) as e:
            print(f"error reading {args.dataset}: {e}", file=sys.stderr)
            return BAD_INPUT
        records = atlas.records_from_rows(rows)
    elif args.max_sum is not None:
        records = hexlab.build_dataset(args.max_sum, args.offsets, args.seed, args.jobs)
    else:
        raise BadInput("hexlab needs --dataset PATH or --max-sum N")
    summary, text, data = _hexlab_report(records, args)
    if not args.quiet:
        sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.with_suffix(".txt").write_text(text)
            out.with_suffix(".json").write_text(json.dumps(data, indent=1) + "\n")
        except OSError as e:
            print(f"error writing {out}: {e}", file=sys.stderr)
            return BAD_INPUT
    return COUNTEREXAMPLE if summary.counterexamples else OK


def cmd_render(args) -> int:
    shape = _shape(args.shape)
    d = _direction(shape, args.x, args.y)
    text = render(shape, d.x, d.y, _offset(args.offset), args.mode, _offset(args.t_max))
    try:
        Path(args.out).write_text(text)
    except OSError as e:
        print(f"error writing {args.out}: {e}", file=sys.stderr)
        return BAD_INPUT
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="obtuse-billiards", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="offset-grid seed")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    p.add_argument("--quiet", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("period", help="candidate and realized periods for one direction")
    q.add_argument("shape")
    q.add_argument("x", type=int)
    q.add_argument("y", type=int)
    q.add_argument("--offset")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_period)

    v = sub.add_parser("verify", help="formula/oracle sweep with zero tolerance")
    v.add_argument("shape")
    v.add_argument("--max-sum", type=int, default=20)
    v.add_argument("--offsets", type=int, default=8)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("atlas", help="write probe rows as CSV or JSON")
    a.add_argument("shape")
    a.add_argument("--max-sum", type=int, default=20)
    a.add_argument("--offsets", type=int, default=4)
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.add_argument("--out")
    a.set_defaults(func=cmd_atlas)

    h = sub.add_parser("hexlab", help="hexagon census, modulus search and closure map")
    src = h.add_mutually_exclusive_group()
    src.add_argument("--dataset")
    src.add_argument("--max-sum", type=int)
    h.add_argument("--offsets", type=int, default=6)
    h.add_argument("--grid-search", action="store_true")
    h.add_argument("--closure", action="store_true")
    h.add_argument("--out", help="report stem; writes STEM.txt and STEM.json")
    h.set_defaults(func=cmd_hexlab)

    r = sub.add_parser("render", help="SVG of the tessellation, unfolding and folded orbit")
    r.add_argument("shape")
    r.add_argument("x", type=int)
    r.add_argument("y", type=int)
    r.add_argument("--offset", default="1/2")
    r.add_argument("--mode", choices=("unfold", "fold", "both"), default="both")
    r.add_argument("--t-max")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return BAD_INPUT if e.code else OK
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s")
    if getattr(args, "max_sum", None) is not None and args.max_sum < 0:
        print("--max-sum must be non-negative", file=sys.stderr)
        return BAD_INPUT
    try:
        return args.func(args)
    except BadInput as e:
        print(f"bad input: {e}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
