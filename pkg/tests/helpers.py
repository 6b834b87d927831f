"""Independent oracles and seeded scenario builders shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction as Q
from itertools import product

from normdom import BallCover, BallSpec, Diagonal, FinVector, Flag
from normdom.boxes import Box, Interval


# -- grid oracle for box unions ---------------------------------------------------
#
# The breakpoints of every box split each axis into points, open gaps and two
# rays. Each product cell is either inside or outside every box, so a cell is
# classified by one representative point. This is slow but shares nothing
# with the subtraction engine.

def _cells(breaks):
    bs = sorted(set(breaks))
    cells = [(None, bs[0], bs[0] - 1)]
    for a, b in zip(bs, bs[1:]):
        cells.append((a, a, a))
        cells.append((a, b, (a + b) / 2))
    cells.append((bs[-1], bs[-1], bs[-1]))
    cells.append((bs[-1], None, bs[-1] + 1))
    return cells


def _gap(cell, lo, hi):
    a, b, _ = cell
    below = lo - b if b is not None else Q(0)
    above = a - hi if a is not None else Q(0)
    return max(Q(0), below, above)


def _inside(iv: Interval, x) -> bool:
    return x in iv


def grid_cells(boxes, extra=()):
    dims = len(boxes[0].intervals) if boxes else len(extra[0])
    axes = []
    for pos in range(dims):
        breaks = [e for b in boxes for e in (b.intervals[pos].lo, b.intervals[pos].hi)]
        breaks += [x[pos] for x in extra]
        axes.append(_cells(breaks))
    return product(*axes)


def oracle_distance(lo, hi, rates, boxes):
    """inf over points outside the union of max_k dist(x_k, [lo_k, hi_k]) / rates_k."""
    best = None
    for cell in grid_cells(boxes, [lo, hi]):
        rep = [c[2] for c in cell]
        if any(all(_inside(iv, x) for iv, x in zip(b.intervals, rep)) for b in boxes):
            continue
        d = max(_gap(c, l, h) / r for c, l, h, r in zip(cell, lo, hi, rates))
        best = d if best is None else min(best, d)
    return best


def oracle_covered(q: Box, boxes) -> bool:
    """True when every grid cell meeting q lies in some box."""
    allb = [q, *boxes]
    for cell in grid_cells(allb):
        rep = [c[2] for c in cell]
        if not all(_inside(iv, x) for iv, x in zip(q.intervals, rep)):
            continue
        if not any(all(_inside(iv, x) for iv, x in zip(b.intervals, rep)) for b in boxes):
            return False
    return True


def random_box(rng: random.Random, indices, spread=4, den=4, closed=None) -> Box:
    ivs = []
    for _ in indices:
        a = Q(rng.randint(-spread * den, spread * den), den)
        b = a + Q(rng.randint(0, spread * den), den)
        lc = rng.random() < 0.5 if closed is None else closed
        hc = rng.random() < 0.5 if closed is None else closed
        if a == b:
            lc = hc = True
        ivs.append(Interval(a, b, lc, hc))
    return Box(tuple(indices), tuple(ivs))


# -- tables and norms ----------------------------------------------------------------

def random_table(rng: random.Random, rows=20, cols=20, top=1000):
    return [[rng.randint(0, top) for _ in range(cols)] for _ in range(rows)]


def random_diagonal(rng: random.Random, indices, top=9, den=4) -> Diagonal:
    w = {k: Q(rng.randint(1, top * den), den) for k in indices}
    return Diagonal.of(w, Q(rng.randint(1, top * den), den))


def random_vector(rng: random.Random, indices, den=16, spread=5) -> FinVector:
    return FinVector({k: Q(rng.randint(-spread * den, spread * den), rng.randint(1, den))
                      for k in indices if rng.random() < 0.7})


# -- cover scenarios --------------------------------------------------------------------

def extension_scenario(seed: int):
    """(base norm, cover, depth) for a flag of total dimension <= 5, depth <= 4.

    Two open level-0 boxes overlap across the closed base unit box; a few more
    balls sit at higher levels.
    """
    rng = random.Random(seed)
    depth = rng.randint(1, 4)
    nbase = rng.randint(1, 5 - depth)
    base_idx = list(range(nbase))
    flag = Flag(base_idx, range(nbase, nbase + depth))
    top = list(flag.slice(depth))
    w = {k: Q(rng.randint(1, 8), rng.randint(1, 4)) for k in base_idx}
    base = Diagonal.of(w)

    h = Q(rng.randint(6, 8), 8)
    s = Q(rng.randint(3, 5), 8)
    weights = {0: w[0] / h}
    for k in base_idx[1:]:
        weights[k] = w[k] * Q(rng.randint(1, 3), 4)
    for k in top[nbase:]:
        weights[k] = Q(rng.randint(1, 4), rng.randint(1, 3))
    ball_norm = Diagonal.of(weights)
    levels = {0: [BallSpec(FinVector({0: -s / w[0]}), 1, ball_norm, True),
                  BallSpec(FinVector({0: s / w[0]}), 1, ball_norm, True)]}
    for n in range(1, depth + 1):
        F = flag.slice(n)
        levels[n] = [
            BallSpec(FinVector({k: Q(rng.randint(-8, 8), 4) for k in F}),
                     Q(rng.randint(1, 4), 2), random_diagonal(rng, top, 4, 2), rng.random() < 0.5)
            for _ in range(rng.randint(0, 2))
        ]
    return base, BallCover(flag, levels), depth


def opening_scenario(seed: int, depth: int = 6, per_level: int = 8) -> BallCover:
    rng = random.Random(seed)
    flag = Flag([0], range(1, depth + 1))
    levels = {}
    for n in range(depth + 1):
        F = flag.slice(n)
        balls = []
        for _ in range(rng.randint(1, per_level)):
            c = FinVector({k: Q(rng.randint(-6, 6), rng.randint(1, 4)) for k in F})
            w = {k: Q(rng.randint(1, 4), rng.randint(1, 3)) for k in range(depth + 1)}
            balls.append(BallSpec(c, Q(rng.randint(1, 6), rng.randint(1, 3)),
                                  Diagonal.of(w), rng.random() < 0.8))
        levels[n] = balls
    return BallCover(flag, levels)


def box_cover(radius, depth: int) -> BallCover:
    """One open sup-norm ball of the given radius at the origin, on Flag([0], 1..depth)."""
    return BallCover(Flag([0], range(1, depth + 1)),
                     {0: [BallSpec(FinVector(), radius, Diagonal.sup(), True)]})
