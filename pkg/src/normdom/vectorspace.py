"""Finitely supported rational vectors over the basis (e_k), k >= 0."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Scalar = Fraction


def as_scalar(value) -> Fraction:
    """Coerce ints and Fractions; floats are refused so nothing gets rounded."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact scalar {value!r}")
    return Fraction(value)


class IndexSet(tuple):
    """Sorted, duplicate-free tuple of basis indices."""

    def __new__(cls, indices: Iterable[int] = ()):
        items = sorted(set(int(i) for i in indices))
        if items and items[0] < 0:
            raise ValueError("basis indices are non-negative")
        return super().__new__(cls, items)

    def __repr__(self) -> str:
        return "IndexSet(%s)" % list(self)

    def union(self, other: Iterable[int]) -> IndexSet:
        return IndexSet(list(self) + list(other))


@dataclass(frozen=True)
class FinVector:
    """Immutable map index -> nonzero rational. Missing indices are zero."""

    items: tuple[tuple[int, Fraction], ...] = ()

    def __init__(self, coords: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        if isinstance(coords, Mapping):
            coords = coords.items()
        acc: dict[int, Fraction] = {}
        for k, v in coords:
            k = int(k)
            if k < 0:
                raise ValueError("basis indices are non-negative")
            acc[k] = acc.get(k, Fraction(0)) + as_scalar(v)
        object.__setattr__(
            self, "items", tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        )

    @classmethod
    def basis(cls, k: int, scale=1) -> FinVector:
        return cls({k: scale})

    @classmethod
    def zero(cls) -> FinVector:
        return cls()

    def __getitem__(self, k: int) -> Fraction:
        for i, v in self.items:
            if i == k:
                return v
        return Fraction(0)

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.items)

    def __add__(self, other: FinVector) -> FinVector:
        return combine(1, self, 1, other)

    def __sub__(self, other: FinVector) -> FinVector:
        return combine(1, self, -1, other)

    def __neg__(self) -> FinVector:
        return FinVector((k, -v) for k, v in self.items)

    def __mul__(self, a) -> FinVector:
        a = as_scalar(a)
        return FinVector((k, a * v) for k, v in self.items)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self.items:
            return "FinVector(0)"
        return "FinVector(%s)" % ", ".join(f"{k}: {v}" for k, v in self.items)


def support(v: FinVector) -> IndexSet:
    return IndexSet(k for k, _ in v.items)


def combine(a, u: FinVector, b, w: FinVector) -> FinVector:
    """Return a*u + b*w; cancelled coordinates disappear."""
    a, b = as_scalar(a), as_scalar(b)
    return FinVector([(k, a * x) for k, x in u.items] + [(k, b * x) for k, x in w.items])


def restrict(v: FinVector, J: Iterable[int]) -> FinVector:
    keep = set(J)
    return FinVector((k, x) for k, x in v.items if k in keep)


@dataclass(frozen=True)
class Flag:
    """Chain F_0 = span(base) and F_n = F_0 + span(added[:n])."""

    base: IndexSet
    added: tuple[int, ...] = ()

    def __init__(self, base: Iterable[int] = (), added: Iterable[int] = ()):
        base = IndexSet(base)
        added = tuple(int(j) for j in added)
        if len(set(added)) != len(added):
            raise ValueError(f"flag indices repeat: {list(added)}")
        clash = set(base) & set(added)
        if clash:
            raise ValueError(f"flag indices {sorted(clash)} already in the base")
        if any(j < 0 for j in added):
            raise ValueError("basis indices are non-negative")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "added", added)

    @property
    def depth(self) -> int:
        return len(self.added)

    def slice(self, n: int) -> IndexSet:
        if not 0 <= n <= self.depth:
            raise ValueError(f"level {n} outside flag of depth {self.depth}")
        return self.base.union(self.added[:n])

    def level_of(self, v: FinVector) -> int | None:
        """Smallest n with support(v) inside F_n, or None if there is none."""
        position = {j: m for m, j in enumerate(self.added)}
        n = 0
        for k in support(v):
            if k in self.base:
                continue
            if k not in position:
                return None
            n = max(n, position[k] + 1)
        return n


def random_vector(
    rng: random.Random,
    indices: Iterable[int],
    denominator_bound: int = 64,
    magnitude: int = 4,
    density: float = 1.0,
) -> FinVector:
    """Reproducible rational vector supported inside ``indices``.

    Coordinates are p/q with 1 <= q <= denominator_bound and |p/q| <= magnitude.
    """
    coords = {}
    for k in indices:
        if density < 1.0 and rng.random() >= density:
            continue
        q = rng.randint(1, denominator_bound)
        p = rng.randint(-magnitude * q, magnitude * q)
        coords[k] = Fraction(p, q)
    return FinVector(coords)
