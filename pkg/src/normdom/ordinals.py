"""Ordinals below omega^omega in Cantor normal form, and the injections
f_alpha : {beta <= alpha} -> N used to build a non-dominated F on omega_1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from itertools import product
from typing import Iterable, Sequence

from .domination import FuncTable, SepDomCert, check_sepdom, solve_sepdom_table
from .errors import MalformedInputError, OutOfDomainError


@total_ordering
@dataclass(frozen=True)
class CnfOrdinal:
    """omega^e1 * c1 + ... + omega^em * cm with e1 > ... > em >= 0, ci >= 1."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        terms = tuple((int(e), int(c)) for e, c in self.terms)
        for e, c in terms:
            if e < 0 or c < 1:
                raise MalformedInputError(f"bad CNF term omega^{e}*{c}")
        if any(a[0] <= b[0] for a, b in zip(terms, terms[1:])):
            raise MalformedInputError("CNF exponents must strictly decrease")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def finite(cls, n: int) -> CnfOrdinal:
        if n < 0:
            raise MalformedInputError("ordinals are non-negative")
        return cls(((0, n),) if n else ())

    @classmethod
    def omega_power(cls, e: int, c: int = 1) -> CnfOrdinal:
        return cls(((e, c),))

    @property
    def is_finite(self) -> bool:
        return not self.terms or self.terms[0][0] == 0

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    # CNF order is lexicographic on the term list, and tuples compare that way
    def __lt__(self, other: CnfOrdinal) -> bool:
        return self.terms < other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
                continue
            base = "w" if e == 1 else f"w^{e}"
            parts.append(base if c == 1 else f"{base}*{c}")
        return " + ".join(parts)


LESS, EQUAL, GREATER = "less", "equal", "greater"


def ord_cmp(a: CnfOrdinal, b: CnfOrdinal) -> str:
    if a.terms == b.terms:
        return EQUAL
    return LESS if a.terms < b.terms else GREATER


def pair(a: int, b: int) -> int:
    """Cantor pairing, a bijection N x N -> N."""
    return (a + b) * (a + b + 1) // 2 + b


def unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


def encode_cnf(beta: CnfOrdinal) -> int:
    """Injective code of the term list: [] -> 0, [t, *rest] -> 1 + <<e, c-1>, code(rest)>."""
    code = 0
    for e, c in reversed(beta.terms):
        code = 1 + pair(pair(e, c - 1), code)
    return code


def decode_cnf(code: int) -> CnfOrdinal:
    terms = []
    while code:
        head, code = unpair(code - 1)
        e, c = unpair(head)
        terms.append((e, c + 1))
    return CnfOrdinal(tuple(terms))


def f_alpha(alpha: CnfOrdinal, beta: CnfOrdinal) -> int:
    """Injection of {beta <= alpha} into N: identity for finite alpha, CNF code otherwise."""
    if beta > alpha:
        raise OutOfDomainError(
            f"f_alpha is only defined for beta <= alpha, got beta = {beta} > {alpha}",
            {"alpha": str(alpha), "beta": str(beta)},
        )
    if alpha.is_finite:
        return int(beta)
    return encode_cnf(beta)


def big_F(alpha: CnfOrdinal, beta: CnfOrdinal) -> int:
    return f_alpha(alpha, beta) if beta <= alpha else 0


def ordinals_upto(alpha: CnfOrdinal, max_coeff: int) -> list[CnfOrdinal]:
    """Every beta <= alpha whose CNF coefficients are all <= max_coeff."""
    top = alpha.terms[0][0] if alpha.terms else 0
    out = []
    for coeffs in product(range(max_coeff + 1), repeat=top + 1):
        terms = tuple((e, c) for e, c in zip(range(top, -1, -1), coeffs) if c)
        beta = CnfOrdinal(terms)
        if beta <= alpha:
            out.append(beta)
    return sorted(out)


@dataclass
class OrdinalDemo:
    ordinals: list[CnfOrdinal]
    table: FuncTable
    cert: SepDomCert


def demo_countable_domination(ordinals: Sequence[CnfOrdinal]) -> OrdinalDemo:
    """F restricted to a finite list x list grid is always separably dominated."""
    ordinals = list(ordinals)
    if not ordinals:
        raise MalformedInputError("need at least one ordinal")
    table = FuncTable([[big_F(a, b) for b in ordinals] for a in ordinals])
    cert = solve_sepdom_table(table)
    ok, bad = check_sepdom(table, cert)
    if not ok:
        raise AssertionError(f"certificate fails at {bad}")
    return OrdinalDemo(ordinals, table, cert)


def parse_ordinal(data: Iterable) -> CnfOrdinal:
    try:
        return CnfOrdinal(tuple((e, c) for e, c in data))
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad ordinal {data!r}: {exc}") from None
