"""Exact axis-aligned boxes with open or closed faces.

Every norm in this package is a weighted supremum norm on each finite slice,
so every ball is a box. Containment of a box in a finite union of boxes is
decided exactly by recursive box subtraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .vectorspace import FinVector, IndexSet


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    @property
    def empty(self) -> bool:
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def contains(self, other: Interval) -> bool:
        if other.empty:
            return True
        if other.lo < self.lo or (other.lo == self.lo and other.lo_closed and not self.lo_closed):
            return False
        if other.hi > self.hi or (other.hi == self.hi and other.hi_closed and not self.hi_closed):
            return False
        return True

    def intersect(self, other: Interval) -> Interval:
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)

    def point(self) -> Fraction:
        """Some member of a nonempty interval, preferring endpoints."""
        if self.lo_closed:
            return self.lo
        if self.hi_closed:
            return self.hi
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        return "%s%s, %s%s" % (
            "[" if self.lo_closed else "(", self.lo, self.hi, "]" if self.hi_closed else ")"
        )


@dataclass(frozen=True)
class Box:
    """Product of intervals over an index set; coordinates not listed are 0."""

    indices: IndexSet
    intervals: tuple[Interval, ...]

    def __post_init__(self):
        if len(self.indices) != len(self.intervals):
            raise ValueError("one interval per index")

    @classmethod
    def from_map(cls, sides: dict[int, Interval]) -> Box:
        idx = IndexSet(sides)
        return cls(idx, tuple(sides[k] for k in idx))

    def side(self, k: int) -> Interval:
        return self.intervals[self.indices.index(k)]

    @property
    def empty(self) -> bool:
        return any(iv.empty for iv in self.intervals)

    def __contains__(self, p: FinVector) -> bool:
        if any(k not in self.indices for k, _ in p):
            return False
        return all(p[k] in iv for k, iv in zip(self.indices, self.intervals))

    def contains_box(self, other: Box) -> bool:
        return all(a.contains(b) for a, b in zip(self.intervals, other.intervals))

    def intersects(self, other: Box) -> bool:
        return not any(a.intersect(b).empty for a, b in zip(self.intervals, other.intervals))

    def point(self) -> FinVector:
        return FinVector({k: iv.point() for k, iv in zip(self.indices, self.intervals)})

    def vertices(self) -> list[FinVector]:
        """Corner points, at most 2^d; degenerate sides contribute one value."""
        corners = []
        sides = [(iv.lo,) if iv.lo == iv.hi else (iv.lo, iv.hi) for iv in self.intervals]
        for choice in product(*sides):
            corners.append(FinVector(dict(zip(self.indices, choice))))
        return corners

    def __str__(self) -> str:
        return " x ".join(f"x{k} in {iv}" for k, iv in zip(self.indices, self.intervals))


# -- subtraction engine ---------------------------------------------------------
#
# Internally each coordinate is rescaled by the lcm of the denominators seen in
# it, so intervals become (lo, hi, lo_closed, hi_closed) tuples of Python ints.

def _meet(a, b):
    alo, ahi, alc, ahc = a
    blo, bhi, blc, bhc = b
    if alo > blo:
        lo, lc = alo, alc
    elif alo < blo:
        lo, lc = blo, blc
    else:
        lo, lc = alo, alc and blc
    if ahi < bhi:
        hi, hc = ahi, ahc
    elif ahi > bhi:
        hi, hc = bhi, bhc
    else:
        hi, hc = ahi, ahc and bhc
    if lo > hi or (lo == hi and not (lc and hc)):
        return None
    return (lo, hi, lc, hc)


def _covers(a, b) -> bool:
    return ((b[0] > a[0] or (b[0] == a[0] and (a[2] or not b[2])))
            and (b[1] < a[1] or (b[1] == a[1] and (a[3] or not b[3]))))


def _touches(p, b) -> bool:
    for x, y in zip(p, b):
        if _meet(x, y) is None:
            return False
    return True


def _uncovered_sides(p, b) -> int:
    return sum(1 for x, y in zip(p, b) if not _covers(y, x))


def _subtract(p, a) -> list:
    """Disjoint pieces of p outside a, at most two per coordinate."""
    pieces = []
    sides = list(p)
    for pos, ai in enumerate(a):
        side = sides[pos]
        below = _meet((side[0], ai[0], side[2], not ai[2]), side)
        above = _meet((ai[1], side[1], not ai[3], side[3]), side)
        for part in (below, above):
            if part is not None:
                piece = sides.copy()
                piece[pos] = part
                pieces.append(tuple(piece))
        side = _meet(side, ai)
        if side is None:
            break
        sides[pos] = side
    return pieces


class _Frame:
    """Per-coordinate integer rescaling of a family of boxes."""

    def __init__(self, boxes: Sequence[Box], extra: Sequence[Sequence[Fraction]] = ()):
        dims = len(boxes[0].intervals)
        self.scale = []
        for pos in range(dims):
            den = 1
            for b in boxes:
                iv = b.intervals[pos]
                den = math.lcm(den, Fraction(iv.lo).denominator, Fraction(iv.hi).denominator)
            for values in extra:
                den = math.lcm(den, Fraction(values[pos]).denominator)
            self.scale.append(den)

    def num(self, pos: int, x) -> int:
        x = Fraction(x)
        return x.numerator * (self.scale[pos] // x.denominator)

    def box(self, b: Box):
        return tuple(
            (self.num(pos, iv.lo), self.num(pos, iv.hi), iv.lo_closed, iv.hi_closed)
            for pos, iv in enumerate(b.intervals)
        )

    def point(self, indices: IndexSet, piece) -> FinVector:
        coords = {}
        for k, s, (lo, hi, lc, hc) in zip(indices, self.scale, piece):
            coords[k] = Fraction(lo if lc else hi if hc else Fraction(lo + hi, 2), s)
        return FinVector(coords)


def _pick(piece, pool):
    """Box of the pool leaving the fewest uncovered sides of the piece."""
    best, best_count = None, None
    for b in pool:
        c = _uncovered_sides(piece, b)
        if best_count is None or c < best_count:
            best, best_count = b, c
            if c == 0:
                break
    return best, best_count


def uncovered_point(q: Box, boxes: Sequence[Box]) -> FinVector | None:
    """A point of q outside every box, or None when q is inside the union.

    All boxes must share q's index set.
    """
    if q.empty:
        return None
    if not q.indices:
        return None if boxes else FinVector()
    frame = _Frame([q, *boxes])
    root = frame.box(q)
    stack = [(root, [b for b in map(frame.box, boxes) if _touches(root, b)])]
    while stack:
        piece, pool = stack.pop()
        if not pool:
            return frame.point(q.indices, piece)
        first, count = _pick(piece, pool)
        if count == 0:
            continue
        rest = [b for b in pool if b is not first]
        for sub in _subtract(piece, first):
            stack.append((sub, [b for b in rest if _touches(sub, b)]))
    return None


def box_in_union(q: Box, boxes: Sequence[Box]) -> bool:
    return uncovered_point(q, boxes) is None


def dilate(lo: Sequence[Fraction], hi: Sequence[Fraction], rates: Sequence[Fraction],
           t: Fraction, indices: IndexSet, closed: bool) -> Box:
    return Box(indices, tuple(
        Interval(l - t * r, h + t * r, closed, closed) for l, h, r in zip(lo, hi, rates)
    ))


def max_dilation(
    indices: IndexSet,
    lo: Sequence[Fraction],
    hi: Sequence[Fraction],
    rates: Sequence[Fraction],
    boxes: Sequence[Box],
    closed: bool,
) -> tuple[Fraction, FinVector | None]:
    """Largest t >= 0 with the box [lo - t*rates, hi + t*rates] inside the union.

    This supremum equals the distance from the core box [lo, hi] to the
    complement of the union, measured in ``max_k |x_k| / rates_k``; it does
    not depend on ``closed``. It is found exactly by subtracting the union
    from a dilation large enough to reach past every box and minimising the
    distance over the uncovered pieces (branch and bound). Also returns a
    point of a nearest uncovered piece.
    """
    if any(r <= 0 for r in rates):
        raise ValueError("dilation rates must be positive")
    reach = Fraction(1)
    for pos, r in enumerate(rates):
        for b in boxes:
            iv = b.intervals[pos]
            reach = max(reach, (lo[pos] - iv.lo) / r, (iv.hi - hi[pos]) / r)
    outer = dilate(lo, hi, rates, reach + 1, indices, True)
    best = reach + 1
    if not indices:
        return (Fraction(0), FinVector()) if not boxes else (best, None)

    frame = _Frame([outer, *boxes], [lo, hi])
    core_lo = [frame.num(p, x) for p, x in enumerate(lo)]
    core_hi = [frame.num(p, x) for p, x in enumerate(hi)]
    factor = [1 / (s * r) for s, r in zip(frame.scale, rates)]

    def distance(piece) -> Fraction:
        d = Fraction(0)
        for p, (plo, phi, _, _) in enumerate(piece):
            gap = max(plo - core_hi[p], core_lo[p] - phi, 0)
            if gap:
                d = max(d, gap * factor[p])
        return d

    root = frame.box(outer)
    witness = None
    stack = [(root, [b for b in map(frame.box, boxes) if _touches(root, b)])]
    while stack:
        piece, pool = stack.pop()
        d = distance(piece)
        if d >= best:
            continue
        if not pool:
            best, witness = d, piece
            if best == 0:
                break
            continue
        first, count = _pick(piece, pool)
        if count == 0:
            continue
        rest = [b for b in pool if b is not first]
        for sub in _subtract(piece, first):
            stack.append((sub, [b for b in rest if _touches(sub, b)]))
    if witness is None:
        raise ValueError("union covers the whole search region; boxes are unbounded")
    return best, frame.point(indices, witness)
