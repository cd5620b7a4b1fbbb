"""Parameter sweeps: offset sampling, per-orbit probes and the verification pass."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from gmpy2 import mpq

from . import fence
from .geometry import angle_of, rat
from .orbits import (
    DirectionPair,
    Status,
    detect_period_unfolding,
    first_alignment,
    fold_offset,
    pair,
    unfold_trace,
)
from .tessellation import ShapeId, get

JITTER_DEN = 10007  # prime, coprime to 6x for every x in reach
FILL_OFFSETS = 48


def coprime_pairs(shape: ShapeId, max_sum: int) -> list:
    """Direction pairs in the shape's working range with x + y <= max_sum."""
    out = []
    for s in range(1, max_sum + 1):
        for x in range(0, s + 1):
            y = s - x
            if y < 1 or gcd(x, y) != 1:
                continue
            d = DirectionPair(x, y)
            if shape is ShapeId.HEXAGON:
                if d.hexagon_range:
                    out.append(d)
            elif x < y:
                out.append(d)
    return sorted(out, key=lambda d: (d.x, d.y))


def _phase_period(d: DirectionPair) -> Optional[mpq]:
    """Offset shift that moves every contact point by one spacing."""
    if d.x == 0:
        return None
    _, s = fence.multiplicity_and_spacing(d.x, d.y)
    return s * d.x / d.y


def offsets(shape: ShapeId, d: DirectionPair, k: int, seed: int = 0) -> list:
    """``k`` non-singular offsets in (-1, 1), deterministic in ``seed``.

    For the three obtuse shapes the offsets are stratified over one period of
    the contact-point phase, so every barrier count the pair admits shows up;
    the hexagon gets offsets stratified over the whole edge.  Each stratum
    carries a jitter j/10007; singular draws are redrawn.
    """
    tess = get(shape)
    rng = random.Random(f"{seed}:{shape.value}:{d.x}:{d.y}")
    period = None if shape is ShapeId.HEXAGON else _phase_period(d)
    out = []
    for i in range(k):
        for _ in range(50):
            jitter = mpq(rng.randrange(1, JITTER_DEN), JITTER_DEN)
            if period is None:
                a = -1 + 2 * (i + jitter) / k
            else:
                a = period * (i + jitter) / k
                while a >= 1:
                    a -= period
            if a in out or a <= -1 or a >= 1:
                continue
            if shape is ShapeId.HEXAGON:
                r = fold_offset(tess, a, d)
                ok = r.status is not Status.SINGULAR
            else:
                ok = detect_period_unfolding(tess, a, d).status is not Status.SINGULAR
            if ok:
                out.append(a)
                break
        else:
            raise RuntimeError(f"could not find a non-singular offset for {d}")
    return out


@dataclass
class Probe:
    shape: str
    x: int
    y: int
    a: mpq
    status: str
    period: Optional[int]
    T: Optional[mpq]
    N: Optional[int]
    branch: str
    unfold_period: Optional[int] = None

    @property
    def theta(self) -> float:
        return angle_of(self.x, self.y)


def probe(shape: ShapeId, d: DirectionPair, a) -> Probe:
    tess = get(shape)
    a = rat(a)
    folded = fold_offset(tess, a, d)
    br = "%d,%d" % fence.branch(d.x, d.y)
    if shape is ShapeId.HEXAGON:
        return Probe(shape.value, d.x, d.y, a, folded.status.value, folded.period, None, None, br)
    unfolded = detect_period_unfolding(tess, a, d)
    return Probe(
        shape.value, d.x, d.y, a, folded.status.value, folded.period,
        unfolded.T, unfolded.N, br, unfolded.period,
    )


@dataclass
class PairReport:
    x: int
    y: int
    probes: list
    mismatches: list = field(default_factory=list)
    realized: set = field(default_factory=set)
    singular: int = 0
    extra: int = 0  # refinement probes beyond the requested k


def check_pair(shape: ShapeId, d: DirectionPair, k: int, seed: int = 0) -> PairReport:
    """Run both engines at ``k`` offsets and every structural identity."""
    tess = get(shape)
    rep = PairReport(d.x, d.y, [])
    bad = rep.mismatches.append
    pred = fence.period_formula(shape, d.x, d.y)
    options = {n for n, _ in fence.edge_count_options(shape, d.x, d.y)}
    if d.x and first_alignment(d.x, d.y) != fence.brute_first_alignment(d.x, d.y):
        bad(("first_alignment", d.x, d.y))

    def run(a):
        pr = probe(shape, d, a)
        rep.probes.append(pr)
        tag = (shape.value, d.x, d.y, str(a))
        if pr.status != Status.PERIODIC.value:
            rep.singular += 1
            bad(tag + ("fold not periodic", pr.status))
            return
        rep.realized.add(pr.period)
        if pr.unfold_period != pr.period:
            bad(tag + ("engines disagree", pr.period, pr.unfold_period))
        if pr.period not in pred.candidates:
            bad(tag + ("period outside formula", pr.period, pred.candidates))
        if pr.period % 2:
            bad(tag + ("odd period", pr.period))
        if fence.predicted_period_at(shape, a, d.x, d.y) != pr.period:
            bad(tag + ("offset-resolved formula", pr.period))
        res = detect_period_unfolding(tess, a, d)
        if shape is ShapeId.RHOMBUS60:
            if res.terminal_point.y.denominator != 1:
                bad(tag + ("terminal point off the horizontals",))
        elif res.terminal_class is None or res.terminal_class.name != "H0":
            bad(tag + ("terminal class", res.terminal_class))
        if d.x:
            tr = unfold_trace(tess, a, d, 2 * d.x)
            prof = fence.contact_points(tess, a, d, 2 * d.x)
            m, s = fence.multiplicity_and_spacing(d.x, d.y)
            if tr.vertex_hit or tr.N != prof.N:
                bad(tag + ("N decomposition", tr.N, prof.N))
            if tr.N != tess.edges_per_strip * 2 * d.y + m * prof.b:
                bad(tag + ("N != strip*2y + m*b", tr.N))
            if tr.N not in options:
                bad(tag + ("N outside table", tr.N, options))
            if prof.m != m or prof.spacing != s:
                bad(tag + ("multiplicity/spacing", prof.m, prof.spacing))
            if prof.b != fence.barrier_count_at(a, d.x, d.y, shape):
                bad(tag + ("b_a formula", prof.b))

    for a in offsets(shape, d, k, seed):
        run(a)
    if rep.realized != set(pred.candidates):
        # a coarse grid can miss a narrow phase window; refine before judging
        for a in offsets(shape, d, FILL_OFFSETS, seed + 1):
            if set(pred.candidates) <= rep.realized:
                break
            rep.extra += 1
            run(a)
    if rep.realized != set(pred.candidates):
        bad((shape.value, d.x, d.y, "realized", sorted(rep.realized), pred.candidates))
    if len(pred.candidates) == 2:
        p1, p2 = pred.candidates
        if p2 not in (2 * p1 + 2, 2 * p1 - 2):
            bad((shape.value, d.x, d.y, "p2 != 2p1 +- 2", p1, p2))
    return rep


def _check_job(args):
    return check_pair(*args)


@dataclass
class VerifyReport:
    shape: ShapeId
    pairs: list

    @property
    def mismatches(self) -> list:
        return [m for p in self.pairs for m in p.mismatches]

    @property
    def periodic(self) -> int:
        return sum(1 for p in self.pairs for q in p.probes if q.status == "periodic")

    @property
    def singular(self) -> int:
        return sum(p.singular for p in self.pairs)

    @property
    def extra(self) -> int:
        return sum(p.extra for p in self.pairs)

    @property
    def biperiodic(self) -> int:
        return sum(1 for p in self.pairs if len(p.realized) == 2)

    def summary(self) -> str:
        return (f"{self.shape.value}: {len(self.pairs)} pairs, {self.periodic} periodic probes "
                f"({self.extra} refinement), {self.singular} singular, "
                f"{self.biperiodic} biperiodic pairs, "
                f"{len(self.mismatches)} mismatches")


def verify(shape: ShapeId, max_sum: int, k: int, seed: int = 0, jobs: int = 1) -> VerifyReport:
    pairs = coprime_pairs(shape, max_sum)
    args = [(shape, d, k, seed) for d in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            reports = list(ex.map(_check_job, args, chunksize=4))
    else:
        reports = [check_pair(*a) for a in args]
    return VerifyReport(shape, reports)


def atlas_rows(shape: ShapeId, max_sum: int, k: int, seed: int = 0, jobs: int = 1) -> list:
    pairs = coprime_pairs(shape, max_sum)
    args = [(shape, d, k, seed) for d in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            chunks = list(ex.map(_probe_job, args, chunksize=4))
    else:
        chunks = [_probe_job(a) for a in args]
    rows = [p for chunk in chunks for p in chunk]
    rows.sort(key=lambda p: (p.shape, p.x, p.y, p.a))
    return rows


def _probe_job(args):
    shape, d, k, seed = args
    return [probe(shape, d, a) for a in offsets(shape, d, k, seed)]


__all__ = [
    "PairReport",
    "Probe",
    "VerifyReport",
    "atlas_rows",
    "check_pair",
    "coprime_pairs",
    "offsets",
    "probe",
    "verify",
    "pair",
]
