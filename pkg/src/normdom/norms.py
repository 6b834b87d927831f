"""Exactly evaluable norm expressions.

Every expression is a weighted supremum norm ``x -> max_k w(k)|x_k|`` once
restricted to a finite slice; ``weight`` exposes that closed form while
``eval_norm`` evaluates the expression tree directly, so the two can be
checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .boxes import Box, Interval
from .errors import DomainViolationError, InvalidNormError, UnsupportedShapeError
from .vectorspace import FinVector, Flag, IndexSet, as_scalar, restrict, support

ONE = Fraction(1)


def _positive(value, what: str) -> Fraction:
    value = as_scalar(value)
    if value <= 0:
        raise InvalidNormError(f"{what} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class WeightFunction:
    """Total positive weight on the basis: explicit values plus a default."""

    explicit: tuple[tuple[int, Fraction], ...] = ()
    default: Fraction = ONE

    def __init__(self, explicit: Mapping[int, object] | None = None, default=1):
        items = tuple(sorted(
            (int(k), _positive(v, f"weight at {k}")) for k, v in (explicit or {}).items()
        ))
        object.__setattr__(self, "explicit", items)
        object.__setattr__(self, "default", _positive(default, "default weight"))
        object.__setattr__(self, "_lookup", dict(items))

    def __call__(self, k: int) -> Fraction:
        return self._lookup.get(k, self.default)


class NormExpr:
    """Base class; subclasses are immutable dataclasses."""

    def weight(self, k: int) -> Fraction:
        raise NotImplementedError

    def domain(self) -> IndexSet | None:
        """Indices the norm is defined on, or None for all of the basis."""
        return None

    def explicit_indices(self) -> IndexSet:
        """Indices where the weight may differ from the default."""
        return IndexSet()

    def __call__(self, v: FinVector) -> Fraction:
        return eval_norm(self, v)


@dataclass(frozen=True)
class Diagonal(NormExpr):
    weights: WeightFunction = field(default_factory=WeightFunction)

    @classmethod
    def sup(cls) -> Diagonal:
        """All weights 1: the supremum norm in the basis."""
        return cls(WeightFunction())

    @classmethod
    def of(cls, explicit: Mapping[int, object] | None = None, default=1) -> Diagonal:
        return cls(WeightFunction(explicit, default))

    def weight(self, k: int) -> Fraction:
        return self.weights(k)

    def explicit_indices(self) -> IndexSet:
        return IndexSet(k for k, _ in self.weights.explicit)


@dataclass(frozen=True)
class Scale(NormExpr):
    c: Fraction
    inner: NormExpr

    def __post_init__(self):
        object.__setattr__(self, "c", _positive(self.c, "scale factor"))

    def weight(self, k: int) -> Fraction:
        return self.c * self.inner.weight(k)

    def domain(self):
        return self.inner.domain()

    def explicit_indices(self):
        return self.inner.explicit_indices()


def _meet(domains: Iterable[IndexSet | None]) -> IndexSet | None:
    out = None
    for d in domains:
        if d is None:
            continue
        out = d if out is None else IndexSet(set(out) & set(d))
    return out


@dataclass(frozen=True)
class MaxOf(NormExpr):
    members: tuple[NormExpr, ...]

    def __init__(self, members: Sequence[NormExpr]):
        members = tuple(members)
        if not members:
            raise InvalidNormError("MaxOf needs at least one member")
        object.__setattr__(self, "members", members)

    def weight(self, k: int) -> Fraction:
        return max(m.weight(k) for m in self.members)

    def domain(self):
        return _meet(m.domain() for m in self.members)

    def explicit_indices(self):
        return IndexSet(k for m in self.members for k in m.explicit_indices())


@dataclass(frozen=True)
class Extension(NormExpr):
    """``max(base(x restricted to flag.base), |x_{j_m}| / eps_m)`` on F_0 + span(added).

    One epsilon per added index, so a whole chain of one-step extensions is a
    single expression.
    """

    base: NormExpr
    flag: Flag
    epsilons: tuple[Fraction, ...]

    def __init__(self, base: NormExpr, flag: Flag, epsilons: Sequence[object]):
        eps = tuple(_positive(e, "epsilon") for e in epsilons)
        if len(eps) != flag.depth:
            raise InvalidNormError(
                f"{flag.depth} added indices but {len(eps)} epsilons"
            )
        dom = base.domain()
        outside = set(flag.base) - set(dom) if dom is not None else set()
        if outside:
            raise InvalidNormError(f"base norm undefined on {sorted(outside)}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "flag", flag)
        object.__setattr__(self, "epsilons", eps)

    def weight(self, k: int) -> Fraction:
        if k in self.flag.base:
            return self.base.weight(k)
        for j, e in zip(self.flag.added, self.epsilons):
            if j == k:
                return 1 / e
        raise DomainViolationError(
            f"extension norm undefined at index {k}",
            {"index": k, "domain": list(self.domain())},
        )

    def domain(self):
        return self.flag.slice(self.flag.depth)

    def explicit_indices(self):
        return self.domain()

    def extended(self, j: int, epsilon) -> Extension:
        return Extension(
            self.base, Flag(self.flag.base, self.flag.added + (j,)), self.epsilons + (epsilon,)
        )


@dataclass(frozen=True)
class SupFamily(NormExpr):
    """``max_i member_i(x) / g_i`` over a finite family."""

    members: tuple[tuple[NormExpr, Fraction], ...]

    def __init__(self, members: Sequence[tuple[NormExpr, object]]):
        items = tuple((n, _positive(g, "family constant")) for n, g in members)
        if not items:
            raise InvalidNormError("SupFamily needs at least one member")
        object.__setattr__(self, "members", items)

    def weight(self, k: int) -> Fraction:
        return max(n.weight(k) / g for n, g in self.members)

    def domain(self):
        return _meet(n.domain() for n, _ in self.members)

    def explicit_indices(self):
        return IndexSet(k for n, _ in self.members for k in n.explicit_indices())


def eval_norm(N: NormExpr, v: FinVector) -> Fraction:
    if isinstance(N, Diagonal):
        # compare w|x| as unreduced num/den pairs; one Fraction at the end
        weight = N.weights
        best_n, best_d = 0, 1
        for k, x in v.items:
            w = weight(k)
            n, d = w.numerator * abs(x.numerator), w.denominator * x.denominator
            if n * best_d > best_n * d:
                best_n, best_d = n, d
        return Fraction(best_n, best_d)
    if isinstance(N, Scale):
        return N.c * eval_norm(N.inner, v)
    if isinstance(N, MaxOf):
        return max(eval_norm(m, v) for m in N.members)
    if isinstance(N, Extension):
        dom = set(N.domain())
        stray = [k for k in support(v) if k not in dom]
        if stray:
            raise DomainViolationError(
                f"extension norm evaluated outside its slice at {stray}; extend the chain first",
                {"indices": stray, "domain": sorted(dom)},
            )
        value = eval_norm(N.base, restrict(v, N.flag.base))
        for j, e in zip(N.flag.added, N.epsilons):
            value = max(value, abs(v[j]) / e)
        return value
    if isinstance(N, SupFamily):
        best_n, best_d = 0, 1
        for n, g in N.members:
            value = eval_norm(n, v)
            num, den = value.numerator * g.denominator, value.denominator * g.numerator
            if num * best_d > best_n * den:
                best_n, best_d = num, den
        return Fraction(best_n, best_d)
    raise UnsupportedShapeError(f"unknown norm expression {type(N).__name__}")


def slice_weights(N: NormExpr, J: Iterable[int]) -> dict[int, Fraction]:
    try:
        return {k: N.weight(k) for k in J}
    except NotImplementedError:
        raise UnsupportedShapeError(f"{type(N).__name__} is not axis-aligned") from None


def ball_box(N: NormExpr, J: Iterable[int], r, center: FinVector, closed: bool = True) -> Box:
    """The ball {x : N(x - center) <= r} (or < r) inside V_J, as a box."""
    J = IndexSet(J)
    r = _positive(r, "radius")
    if any(k not in J for k in support(center)):
        raise ValueError(f"center {center} not inside slice {list(J)}")
    w = slice_weights(N, J)
    return Box(J, tuple(
        Interval(center[k] - r / w[k], center[k] + r / w[k], closed, closed) for k in J
    ))


@dataclass
class AxiomReport:
    ok: bool
    checked: int = 0
    violation: str | None = None
    witness: dict = field(default_factory=dict)


DEFAULT_MULTIPLIERS = (Fraction(-2), Fraction(-1), Fraction(1, 3), Fraction(5, 7), Fraction(3))


def check_norm_axioms(
    N: NormExpr,
    samples: Sequence[FinVector],
    multipliers: Sequence[Fraction] = DEFAULT_MULTIPLIERS,
) -> AxiomReport:
    """Exact check of positivity, homogeneity and the triangle inequality."""
    checked = 0
    if eval_norm(N, FinVector()) != 0:
        return AxiomReport(False, checked, "zero vector has nonzero norm")
    values = []
    for v in samples:
        nv = eval_norm(N, v)
        values.append(nv)
        checked += 1
        if v and nv <= 0:
            return AxiomReport(False, checked, "positivity", {"v": v})
        for a in multipliers:
            checked += 1
            if eval_norm(N, a * v) != abs(a) * nv:
                return AxiomReport(False, checked, "homogeneity", {"v": v, "a": a})
    for (i, u), (j, w) in combinations_with_replacement(enumerate(samples), 2):
        checked += 1
        if eval_norm(N, u + w) > values[i] + values[j]:
            return AxiomReport(False, checked, "triangle", {"u": u, "v": w})
    return AxiomReport(True, checked)
