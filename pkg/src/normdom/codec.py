"""JSON wire formats. Rationals travel as "p/q" strings, never as floats."""

from __future__ import annotations

import re
from fractions import Fraction

from .domination import DomCert, FuncTable, SchemaDomCert, SepDomCert, WeightSchema
from .errors import MalformedInputError
from .norms import Diagonal, Extension, MaxOf, NormExpr, Scale, SupFamily, WeightFunction
from .ordinals import CnfOrdinal, parse_ordinal
from .topology import BallCover, BallSpec
from .vectorspace import FinVector, Flag, IndexSet

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def rational_to_json(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rational_from_json(data) -> Fraction:
    if isinstance(data, bool) or isinstance(data, float):
        raise MalformedInputError(f"not an exact rational: {data!r}")
    if isinstance(data, int):
        return Fraction(data)
    if isinstance(data, str) and _RATIONAL.match(data):
        try:
            return Fraction(data.replace(" ", ""))
        except ZeroDivisionError:
            raise MalformedInputError(f"zero denominator in {data!r}") from None
    raise MalformedInputError(f"not a rational string 'p/q': {data!r}")


def _index(key) -> int:
    try:
        k = int(key)
    except (TypeError, ValueError):
        raise MalformedInputError(f"bad basis index {key!r}") from None
    if k < 0:
        raise MalformedInputError(f"negative basis index {k}")
    return k


def _expect(data, kind, what: str):
    if not isinstance(data, kind):
        raise MalformedInputError(f"{what} must be a JSON {kind.__name__}, got {type(data).__name__}")
    return data


def _get(data: dict, key: str, what: str):
    try:
        return data[key]
    except KeyError:
        raise MalformedInputError(f"{what} is missing {key!r}") from None


# -- vectors --------------------------------------------------------------------

def vector_to_json(v: FinVector) -> dict:
    return {str(k): rational_to_json(x) for k, x in v}


def vector_from_json(data) -> FinVector:
    _expect(data, dict, "vector")
    return FinVector({_index(k): rational_from_json(x) for k, x in data.items()})


def flag_to_json(flag: Flag) -> dict:
    return {"base": list(flag.base), "added": list(flag.added)}


def flag_from_json(data) -> Flag:
    _expect(data, dict, "flag")
    try:
        return Flag([_index(k) for k in data.get("base", [])],
                    [_index(k) for k in data.get("added", [])])
    except ValueError as exc:
        raise MalformedInputError(str(exc)) from None


def indexset_from_json(data) -> IndexSet:
    _expect(data, list, "index set")
    return IndexSet(_index(k) for k in data)


# -- norms ------------------------------------------------------------------------

def norm_to_json(N: NormExpr) -> dict:
    if isinstance(N, Diagonal):
        return {
            "type": "diagonal",
            "weights": {str(k): rational_to_json(w) for k, w in N.weights.explicit},
            "default": rational_to_json(N.weights.default),
        }
    if isinstance(N, Scale):
        return {"type": "scale", "c": rational_to_json(N.c), "inner": norm_to_json(N.inner)}
    if isinstance(N, MaxOf):
        return {"type": "max", "members": [norm_to_json(m) for m in N.members]}
    if isinstance(N, Extension):
        return {
            "type": "extension",
            "base": norm_to_json(N.base),
            "flag": flag_to_json(N.flag),
            "epsilons": [rational_to_json(e) for e in N.epsilons],
        }
    if isinstance(N, SupFamily):
        return {
            "type": "supfamily",
            "members": [{"norm": norm_to_json(n), "g": rational_to_json(g)} for n, g in N.members],
        }
    raise TypeError(f"cannot serialize {type(N).__name__}")


def norm_from_json(data) -> NormExpr:
    _expect(data, dict, "norm")
    kind = _get(data, "type", "norm")
    if kind == "diagonal":
        weights = _expect(data.get("weights", {}), dict, "weights")
        return Diagonal(WeightFunction(
            {_index(k): rational_from_json(w) for k, w in weights.items()},
            rational_from_json(data.get("default", "1/1")),
        ))
    if kind == "scale":
        return Scale(rational_from_json(_get(data, "c", "scale norm")),
                     norm_from_json(_get(data, "inner", "scale norm")))
    if kind == "max":
        members = _expect(_get(data, "members", "max norm"), list, "members")
        return MaxOf([norm_from_json(m) for m in members])
    if kind == "extension":
        return Extension(
            norm_from_json(_get(data, "base", "extension norm")),
            flag_from_json(_get(data, "flag", "extension norm")),
            [rational_from_json(e) for e in _get(data, "epsilons", "extension norm")],
        )
    if kind == "supfamily":
        members = _expect(_get(data, "members", "supfamily norm"), list, "members")
        return SupFamily([
            (norm_from_json(_get(m, "norm", "member")), rational_from_json(m.get("g", "1/1")))
            for m in members
        ])
    raise MalformedInputError(f"unknown norm type {kind!r}")


# -- tables and certificates ------------------------------------------------------

def table_to_json(f: FuncTable) -> dict:
    return {"rows": f.rows, "cols": f.cols, "entries": [list(r) for r in f.entries]}


def table_from_json(data) -> FuncTable:
    _expect(data, dict, "table")
    entries = _expect(_get(data, "entries", "table"), list, "entries")
    for row in entries:
        _expect(row, list, "table row")
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool):
                raise MalformedInputError(f"table entries must be integers, got {v!r}")
    f = FuncTable(entries)
    if data.get("rows", f.rows) != f.rows or data.get("cols", f.cols) != f.cols:
        raise MalformedInputError("declared rows/cols do not match the entries")
    return f


def sepdom_to_json(cert: SepDomCert) -> dict:
    if cert.form == "max":
        return {"form": "max", "G": list(cert.G), "H": list(cert.H)}
    enc = lambda v: v if isinstance(v, int) else rational_to_json(v)  # noqa: E731
    return {"form": "product", "G": [enc(v) for v in cert.G], "H": [enc(v) for v in cert.H]}


def sepdom_from_json(data) -> SepDomCert:
    _expect(data, dict, "certificate")
    form = _get(data, "form", "certificate")
    G = _expect(_get(data, "G", "certificate"), list, "G")
    H = _expect(_get(data, "H", "certificate"), list, "H")
    if form == "max":
        for v in G + H:
            if not isinstance(v, int) or isinstance(v, bool):
                raise MalformedInputError("max-form certificates hold integers")
        return SepDomCert(form, G, H)

    def dec(v):
        q = rational_from_json(v)
        return q.numerator if q.denominator == 1 else q

    return SepDomCert(form, [dec(v) for v in G], [dec(v) for v in H])


def schema_from_json(data) -> WeightSchema:
    _expect(data, dict, "schema")
    if "entries" in data:
        rows = _expect(data["entries"], list, "entries")
        cells = [(i, k, v) for i, row in enumerate(rows) for k, v in enumerate(row)]
        n_i = data.get("indices", len(rows))
        n_k = data.get("coords", len(rows[0]) if rows else 0)
    else:
        cells = [tuple(c) for c in data.get("cells", [])]
        n_i, n_k = _get(data, "indices", "schema"), _get(data, "coords", "schema")
    for c in cells:
        if len(c) != 3 or not all(isinstance(v, int) and not isinstance(v, bool) for v in c):
            raise MalformedInputError(f"schema cell must be [i, k, value] integers, got {c!r}")
    return WeightSchema(n_i, n_k, cells)


def schema_to_json(schema: WeightSchema) -> dict:
    return {"indices": schema.indices, "coords": schema.coords,
            "cells": [list(c) for c in schema.cells]}


def domcert_to_json(cert: DomCert) -> dict:
    out = {
        "dominating": norm_to_json(cert.dominating),
        "constants": {str(i): rational_to_json(g) for i, g in sorted(cert.constants.items())},
        "checked_on": [vector_to_json(v) for v in cert.checked_on],
    }
    if isinstance(cert, SchemaDomCert):
        out["slices"] = [list(J) for J in cert.slices]
        out["reference"] = norm_to_json(cert.reference)
        out["table"] = table_to_json(cert.table)
        out["max_cert"] = sepdom_to_json(cert.max_cert)
        out["product_cert"] = sepdom_to_json(cert.product_cert)
    return out


def domcert_from_json(data) -> DomCert:
    _expect(data, dict, "domination certificate")
    constants = _expect(_get(data, "constants", "domination certificate"), dict, "constants")
    return DomCert(
        norm_from_json(_get(data, "dominating", "domination certificate")),
        {_index(i): rational_from_json(g) for i, g in constants.items()},
        [vector_from_json(v) for v in data.get("checked_on", [])],
    )


# -- covers -------------------------------------------------------------------------

def ball_to_json(b: BallSpec) -> dict:
    return {"center": vector_to_json(b.center), "radius": rational_to_json(b.radius),
            "norm": norm_to_json(b.norm), "open": b.open}


def ball_from_json(data) -> BallSpec:
    _expect(data, dict, "ball")
    is_open = data.get("open", True)
    if not isinstance(is_open, bool):
        raise MalformedInputError("ball 'open' must be true or false")
    return BallSpec(
        vector_from_json(_get(data, "center", "ball")),
        rational_from_json(_get(data, "radius", "ball")),
        norm_from_json(_get(data, "norm", "ball")),
        is_open,
    )


def cover_to_json(cover: BallCover) -> dict:
    return {
        "flag": flag_to_json(cover.flag),
        "levels": {str(n): [ball_to_json(b) for b in balls] for n, balls in cover.levels},
    }


def cover_from_json(data) -> BallCover:
    _expect(data, dict, "cover")
    levels = _expect(data.get("levels", {}), dict, "levels")
    return BallCover(
        flag_from_json(_get(data, "flag", "cover")),
        {_index(n): [ball_from_json(b) for b in _expect(balls, list, "level")]
         for n, balls in levels.items()},
    )


# -- ordinals -------------------------------------------------------------------------

def ordinal_to_json(a: CnfOrdinal) -> list:
    return [[e, c] for e, c in a.terms]


def ordinal_from_json(data) -> CnfOrdinal:
    _expect(data, list, "ordinal")
    for t in data:
        if not (isinstance(t, list) and len(t) == 2
                and all(isinstance(v, int) and not isinstance(v, bool) for v in t)):
            raise MalformedInputError(f"ordinal terms are [exponent, coefficient] pairs, got {t!r}")
    return parse_ordinal(data)
