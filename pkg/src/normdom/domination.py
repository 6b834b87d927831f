"""Separable domination of integer tables and domination of norm families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatchError,
    DomainViolationError,
    MalformedInputError,
    SliceCoverageError,
)
from .norms import Diagonal, NormExpr, SupFamily, WeightFunction, eval_norm, slice_weights
from .vectorspace import FinVector, IndexSet, as_scalar, support

MAX = "max"
PRODUCT = "product"


@dataclass(frozen=True)
class FuncTable:
    """Dense grid f(x, y) of non-negative integers."""

    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(v) for v in row) for row in entries)
        if not rows or not rows[0]:
            raise MalformedInputError("table needs at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatchError("ragged table")
        if any(v < 0 for r in rows for v in r):
            raise MalformedInputError("table entries must be non-negative")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_function(cls, rows: int, cols: int, f) -> FuncTable:
        return cls([[f(x, y) for y in range(cols)] for x in range(rows)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __call__(self, x: int, y: int) -> int:
        return self.entries[x][y]


@dataclass(frozen=True)
class SepDomCert:
    form: str
    G: tuple
    H: tuple

    def __init__(self, form: str, G: Sequence, H: Sequence):
        if form not in (MAX, PRODUCT):
            raise MalformedInputError(f"unknown certificate form {form!r}")
        G, H = tuple(G), tuple(H)
        if any(v < 0 for v in G + H):
            raise MalformedInputError("certificate values must be non-negative")
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "H", H)

    def bound(self, x: int, y: int):
        if self.form == MAX:
            return max(self.G[x], self.H[y])
        return self.G[x] * self.H[y]


def solve_sepdom_table(f: FuncTable) -> SepDomCert:
    """G = H = g with g(n) the max of f over the square [0, n]^2.

    A rectangular table is read as zero-padded to a square; g is
    non-decreasing, so f(n, p) <= g(max(n, p)) = max(g(n), g(p)).
    """
    size = max(f.rows, f.cols)
    e = f.entries

    def at(x, y):
        return e[x][y] if x < f.rows and y < f.cols else 0

    g = []
    running = 0
    for n in range(size):
        for m in range(n + 1):
            running = max(running, at(n, m), at(m, n))
        g.append(running)
    return SepDomCert(MAX, g[: f.rows], g[: f.cols])


def check_sepdom(f: FuncTable, cert: SepDomCert) -> tuple[bool, tuple[int, int] | None]:
    """Exhaustive check; returns (ok, first violating (x, y))."""
    if len(cert.G) != f.rows or len(cert.H) != f.cols:
        raise DimensionMismatchError(
            f"certificate is {len(cert.G)}x{len(cert.H)}, table is {f.rows}x{f.cols}"
        )
    for x, row in enumerate(f.entries):
        for y, v in enumerate(row):
            if v > cert.bound(x, y):
                return False, (x, y)
    return True, None


def max_to_product(cert: SepDomCert) -> SepDomCert:
    if cert.form != MAX:
        raise MalformedInputError("expected a max-form certificate")
    return SepDomCert(PRODUCT, [a + 1 for a in cert.G], [b + 1 for b in cert.H])


def product_to_max(g: Sequence, h: Sequence) -> SepDomCert:
    """Ceil the squares: g*h <= max(g^2, h^2) <= max(ceil g^2, ceil h^2)."""
    g = [as_scalar(v) for v in g]
    h = [as_scalar(v) for v in h]
    if any(v < 0 for v in g + h):
        raise MalformedInputError("product certificate entries must be non-negative")
    return SepDomCert(MAX, [math.ceil(v * v) for v in g], [math.ceil(v * v) for v in h])


# -- norms on finite slices ---------------------------------------------------

def _require_domain(N: NormExpr, J: IndexSet, name: str):
    dom = N.domain()
    if dom is not None and not set(J) <= set(dom):
        raise DomainViolationError(
            f"{name} is not defined on all of the slice {list(J)}",
            {"slice": list(J), "domain": list(dom)},
        )


def equivalence_oracle(Na: NormExpr, Nb: NormExpr, J: Iterable[int]) -> tuple[Fraction, FinVector]:
    """Brute force over the 2^|J| vertices of the closed Nb-unit box on V_J.

    Na is convex, so its maximum over that box sits at a vertex; the vertex
    itself is returned as the tightness witness.
    """
    J = IndexSet(J)
    _require_domain(Na, J, "first norm")
    _require_domain(Nb, J, "second norm")
    if not J:
        return Fraction(0), FinVector()
    half = [1 / Nb.weight(k) for k in J]
    best, witness = Fraction(0), FinVector()
    for signs in product((-1, 1), repeat=len(J)):
        v = FinVector({k: s * h for k, s, h in zip(J, signs, half)})
        value = eval_norm(Na, v) / eval_norm(Nb, v)
        if value > best:
            best, witness = value, v
    return best, witness


ORACLE_LIMIT = 12


def equivalence_constant(Na: NormExpr, Nb: NormExpr, J: Iterable[int]) -> Fraction:
    """Least c with Na <= c * Nb on V_J: max over J of the weight ratio."""
    J = IndexSet(J)
    _require_domain(Na, J, "first norm")
    _require_domain(Nb, J, "second norm")
    wa, wb = slice_weights(Na, J), slice_weights(Nb, J)
    c = max((wa[k] / wb[k] for k in J), default=Fraction(0))
    if len(J) <= ORACLE_LIMIT:
        brute, _ = equivalence_oracle(Na, Nb, J)
        if brute != c:
            raise AssertionError(f"closed form {c} disagrees with vertex oracle {brute}")
    return c


@dataclass
class DomCert:
    """N_i <= constants[i] * dominating(v) for every member i and v in checked_on."""

    dominating: NormExpr
    constants: dict[int, Fraction]
    checked_on: list[FinVector] = field(default_factory=list)


def check_domcert(members: Sequence[NormExpr], cert: DomCert,
                  vectors: Sequence[FinVector] | None = None):
    """Return (ok, first violating (i, v))."""
    vectors = cert.checked_on if vectors is None else vectors
    for v in vectors:
        top = eval_norm(cert.dominating, v)
        for i, N in enumerate(members):
            if eval_norm(N, v) > cert.constants[i] * top:
                return False, (i, v)
    return True, None


def basis_probe(members: Sequence[NormExpr]) -> list[FinVector]:
    idx = IndexSet(k for N in members for k in N.explicit_indices())
    return [FinVector.basis(k) for k in idx]


def dominate_family(members: Sequence[NormExpr], g: Sequence | None = None,
                    samples: Sequence[FinVector] = ()) -> DomCert:
    """Dominate a finite family by its weighted supremum ``max_i N_i / g_i``."""
    members = list(members)
    if not members:
        raise MalformedInputError("cannot dominate an empty family")
    g = [Fraction(1)] * len(members) if g is None else [as_scalar(v) for v in g]
    if len(g) != len(members):
        raise DimensionMismatchError(f"{len(members)} members but {len(g)} constants")
    N = SupFamily(list(zip(members, g)))
    cert = DomCert(N, dict(enumerate(g)), list(samples) + basis_probe(members))
    ok, bad = check_domcert(members, cert)
    if not ok:
        raise AssertionError(f"family certificate fails at {bad}")
    return cert


# -- weight schemas -----------------------------------------------------------

@dataclass(frozen=True)
class WeightSchema:
    """f(i, k) for i < indices, k < coords; unlisted cells are 0."""

    indices: int
    coords: int
    cells: tuple[tuple[int, int, int], ...] = ()

    def __init__(self, indices: int, coords: int, cells: Iterable[tuple[int, int, int]] = ()):
        items = {}
        for i, k, v in cells:
            i, k, v = int(i), int(k), int(v)
            if not (0 <= i < indices and 0 <= k < coords):
                raise MalformedInputError(f"cell ({i}, {k}) outside {indices}x{coords}")
            if v < 0:
                raise MalformedInputError("schema values must be non-negative")
            items[(i, k)] = v
        object.__setattr__(self, "indices", int(indices))
        object.__setattr__(self, "coords", int(coords))
        object.__setattr__(self, "cells", tuple(sorted((i, k, v) for (i, k), v in items.items())))

    @classmethod
    def from_function(cls, indices: int, coords: int, f) -> WeightSchema:
        return cls(indices, coords, [(i, k, f(i, k)) for i in range(indices) for k in range(coords)])

    def __call__(self, i: int, k: int) -> int:
        for a, b, v in self.cells:
            if (a, b) == (i, k):
                return v
        return 0

    def table(self) -> dict[tuple[int, int], int]:
        return {(i, k): v for i, k, v in self.cells}


def schema_norms(schema: WeightSchema) -> list[Diagonal]:
    """N_i = max_k (f(i, k) + 1)|x_k|, weight 1 outside the coordinate range."""
    f = schema.table()
    return [
        Diagonal(WeightFunction({k: f.get((i, k), 0) + 1 for k in range(schema.coords)}, 1))
        for i in range(schema.indices)
    ]


@dataclass
class SchemaDomCert(DomCert):
    """DomCert plus the intermediate objects of the slice-wise construction."""

    slices: list[IndexSet] = field(default_factory=list)
    c: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    table: FuncTable | None = None
    max_cert: SepDomCert | None = None
    product_cert: SepDomCert | None = None
    reference: NormExpr | None = None


def covering_slice(v: FinVector, slices: Sequence[IndexSet]) -> int:
    supp = set(support(v))
    for pos, J in enumerate(slices):
        if supp <= set(J):
            return pos
    raise SliceCoverageError(
        f"support {sorted(supp)} lies in no enumerated slice",
        {"support": sorted(supp)},
    )


def dominate_schema(schema: WeightSchema, reference: NormExpr,
                    slice_enumeration: Sequence[Iterable[int]],
                    samples: Sequence[FinVector] = ()) -> SchemaDomCert:
    """Dominate the schema norms through slice-wise equivalence constants.

    c(i, J) is the equivalence constant of N_i against the reference on V_J;
    the ceiled (i, J) table is separably dominated by ``solve_sepdom_table``
    and turned into a product bound c(i, J) <= f(i) g(J) (the table entries
    are at least 1, so the max certificate already is one). With g* the max of
    g over the enumerated slices, the dominating norm is
    ``max_i N_i / (f(i) g*)``, and on every covered vector it stays below the
    reference norm.
    """
    slices = [IndexSet(J) for J in slice_enumeration]
    if not slices:
        raise MalformedInputError("slice enumeration is empty")
    slice_of = [covering_slice(v, slices) for v in samples]
    norms = schema_norms(schema)
    if not norms:
        raise MalformedInputError("schema has no indices")

    c = {(i, j): equivalence_constant(N, reference, J)
         for i, N in enumerate(norms) for j, J in enumerate(slices)}
    table = FuncTable([[math.ceil(c[(i, j)]) for j in range(len(slices))]
                       for i in range(len(norms))])
    mcert = solve_sepdom_table(table)
    ok, bad = check_sepdom(table, mcert)
    if not ok:
        raise AssertionError(f"table certificate fails at {bad}")
    if min(mcert.G + mcert.H) >= 1:
        # entries of at least 1 give max(a, b) <= a * b with no shift
        pcert = SepDomCert(PRODUCT, mcert.G, mcert.H)
    else:
        pcert = max_to_product(mcert)
    g_star = max(pcert.H)
    constants = {i: Fraction(pcert.G[i] * g_star) for i in range(len(norms))}
    N = SupFamily([(n, constants[i]) for i, n in enumerate(norms)])

    checked = list(samples)
    for pos, J in enumerate(slices):
        for k in J:
            checked.append(FinVector.basis(k))
            slice_of.append(pos)
    cert = SchemaDomCert(N, constants, checked, slices=slices, c=c, table=table,
                         max_cert=mcert, product_cert=pcert, reference=reference)
    ok, bad = check_schema_cert(norms, cert, slice_of)
    if not ok:
        raise AssertionError(f"schema certificate fails: {bad}")
    return cert


def check_schema_cert(norms: Sequence[NormExpr], cert: SchemaDomCert,
                      slice_of: Sequence[int] | None = None):
    """Check, on every checked vector v with covering slice J:

    * N_i(v) <= f(i) g(J) reference(v)  (separable bound),
    * N_i(v) <= constants[i] dominating(v),
    * dominating(v) <= reference(v).
    """
    if slice_of is None:
        slice_of = [covering_slice(v, cert.slices) for v in cert.checked_on]
    pc = cert.product_cert
    for v, j in zip(cert.checked_on, slice_of):
        ref = eval_norm(cert.reference, v)
        top = eval_norm(cert.dominating, v)
        if top > ref:
            return False, ("reference", v)
        for i, N in enumerate(norms):
            value = eval_norm(N, v)
            if value > pc.G[i] * pc.H[j] * ref:
                return False, ("separable", i, v)
            if value > cert.constants[i] * top:
                return False, ("dominating", i, v)
    return True, None
