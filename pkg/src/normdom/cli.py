"""Command-line front end.

Each subcommand reads one JSON document, runs a library operation and writes
a JSON result. Exit codes: 0 success, 1 a checked mathematical precondition
failed (diagnostic JSON is still written), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from fractions import Fraction
from itertools import combinations

from . import codec
from .boxes import Box
from .domination import (
    SchemaDomCert,
    check_domcert,
    check_schema_cert,
    check_sepdom,
    dominate_family,
    dominate_schema,
    equivalence_constant,
    equivalence_oracle,
    max_to_product,
    product_to_max,
    schema_norms,
    solve_sepdom_table,
)
from .errors import MalformedInputError, PreconditionError
from .norms import Diagonal, check_norm_axioms, eval_norm
from .ordinals import big_F, demo_countable_domination, f_alpha, ord_cmp
from .topology import (
    absorption_domination,
    build_opening_norm,
    counterexample_balls,
    disjointness_certificate,
    extend_norm_step,
    extension_chain,
    sample_cover_points,
)
from .vectorspace import FinVector, IndexSet, random_vector

EXIT_OK, EXIT_PRECONDITION, EXIT_MALFORMED = 0, 1, 2


class CheckFailed(Exception):
    """A check subcommand found a violation; payload is still emitted."""

    def __init__(self, payload: dict, summary: list[str]):
        self.payload = payload
        self.summary = summary


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return codec.rational_to_json(obj)
    if isinstance(obj, FinVector):
        return codec.vector_to_json(obj)
    if isinstance(obj, IndexSet):
        return list(obj)
    if isinstance(obj, Box):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, default=_jsonable) + "\n"


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".normdom-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: str | None) -> dict:
    try:
        if path is None or path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path) as fh:
                data = json.load(fh)
    except OSError as exc:
        raise MalformedInputError(f"cannot read input: {exc}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"input is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise MalformedInputError("input must be a JSON object")
    return data


def _need(data: dict, key: str):
    if key not in data:
        raise MalformedInputError(f"input is missing {key!r}")
    return data[key]


def _int(data: dict, key: str, default=None) -> int:
    v = data.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool):
        raise MalformedInputError(f"{key!r} must be an integer")
    return v


def _vectors(data: dict, key: str = "samples"):
    raw = data.get(key)
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise MalformedInputError(f"{key!r} must be a list of vectors")
    return [codec.vector_from_json(v) for v in raw]


def _rng(args) -> random.Random:
    return random.Random(args.seed)


def _random_vectors(args, indices, count=None) -> list[FinVector]:
    rng = _rng(args)
    count = args.samples if count is None else count
    return [random_vector(rng, indices, args.denominator_bound) for _ in range(count)]


# -- separable domination ---------------------------------------------------------

def cmd_sepdom_solve(data, args):
    f = codec.table_from_json(data.get("table", data))
    cert = solve_sepdom_table(f)
    return ({"table": codec.table_to_json(f), "cert": codec.sepdom_to_json(cert)},
            [f"solved {f.rows}x{f.cols} table", f"g = {list(cert.G)}"])


def cmd_sepdom_check(data, args):
    f = codec.table_from_json(_need(data, "table"))
    cert = codec.sepdom_from_json(_need(data, "cert"))
    ok, bad = check_sepdom(f, cert)
    payload = {"valid": ok, "counterexample": list(bad) if bad else None,
               "checked": f.rows * f.cols}
    if not ok:
        x, y = bad
        raise CheckFailed(payload, [f"violated at ({x}, {y}): {f(x, y)} > {cert.bound(x, y)}"])
    return payload, [f"{cert.form}-form certificate holds on all {f.rows * f.cols} entries"]


def cmd_sepdom_convert(data, args):
    cert = codec.sepdom_from_json(_need(data, "cert"))
    new = max_to_product(cert) if cert.form == "max" else product_to_max(cert.G, cert.H)
    payload = {"cert": codec.sepdom_to_json(new)}
    if "table" in data:
        f = codec.table_from_json(data["table"])
        payload["table"] = codec.table_to_json(f)
        ok, bad = check_sepdom(f, new)
        payload["valid"] = ok
        if not ok:
            raise CheckFailed(payload, [f"converted certificate fails at {bad}"])
    return payload, [f"converted {cert.form} -> {new.form}"]


# -- norms ----------------------------------------------------------------------------

def _default_slice(N, data):
    if "slice" in data:
        return codec.indexset_from_json(data["slice"])
    return N.domain() or N.explicit_indices() or IndexSet(range(4))


def cmd_norm_eval(data, args):
    N = codec.norm_from_json(_need(data, "norm"))
    if "vectors" in data:
        vs = _vectors(data, "vectors")
        values = [eval_norm(N, v) for v in vs]
        return {"values": values}, [f"evaluated {len(vs)} vectors"]
    v = codec.vector_from_json(_need(data, "vector"))
    value = eval_norm(N, v)
    return {"value": value}, [f"N(v) = {value}"]


def cmd_norm_axioms(data, args):
    N = codec.norm_from_json(_need(data, "norm"))
    samples = _vectors(data)
    if samples is None:
        samples = _random_vectors(args, _default_slice(N, data))
    rep = check_norm_axioms(N, samples)
    payload = {"ok": rep.ok, "checked": rep.checked, "violation": rep.violation,
               "witness": rep.witness, "samples": len(samples)}
    if not rep.ok:
        raise CheckFailed(payload, [f"{rep.violation} fails"])
    return payload, [f"norm axioms hold on {len(samples)} samples ({rep.checked} checks)"]


def cmd_equiv_constant(data, args):
    a = codec.norm_from_json(_need(data, "a"))
    b = codec.norm_from_json(_need(data, "b"))
    J = codec.indexset_from_json(_need(data, "slice"))
    c = equivalence_constant(a, b, J)
    payload = {"c": c}
    if len(J) <= 20:
        brute, witness = equivalence_oracle(a, b, J)
        payload.update({"oracle": brute, "witness": witness})
    return payload, [f"a <= {c} * b on slice {list(J)}"]


def cmd_dominate(data, args):
    members = [codec.norm_from_json(m) for m in _need(data, "members")]
    if "cert" in data:
        cert = codec.domcert_from_json(data["cert"])
        ok, bad = check_domcert(members, cert)
        payload = {"valid": ok, "counterexample": (
            {"member": bad[0], "vector": bad[1]} if bad else None)}
        if not ok:
            raise CheckFailed(payload, [f"member {bad[0]} not dominated at {bad[1]}"])
        return payload, [f"certificate holds on {len(cert.checked_on)} vectors"]
    g = data.get("g")
    if g is not None:
        g = [codec.rational_from_json(v) for v in g]
    samples = _vectors(data)
    if samples is None:
        idx = IndexSet(k for N in members for k in (N.domain() or N.explicit_indices()))
        samples = _random_vectors(args, idx or IndexSet(range(4)))
    cert = dominate_family(members, g, samples)
    return ({"members": [codec.norm_to_json(m) for m in members],
             "cert": codec.domcert_to_json(cert)},
            [f"dominated {len(members)} norms, checked on {len(cert.checked_on)} vectors"])


def cmd_schema_build(data, args):
    schema = codec.schema_from_json(data.get("schema", data))
    norms = schema_norms(schema)
    return ({"norms": [codec.norm_to_json(N) for N in norms]},
            [f"built {len(norms)} diagonal norms"])


def cmd_schema_dominate(data, args):
    schema = codec.schema_from_json(_need(data, "schema"))
    ref = codec.norm_from_json(data["reference"]) if "reference" in data else Diagonal.sup()
    if "slices" in data:
        slices = [codec.indexset_from_json(J) for J in data["slices"]]
    else:
        slices = [IndexSet(range(n + 1)) for n in range(schema.coords)]
    if "cert" in data:
        return _schema_check(schema, ref, slices, data["cert"])
    samples = _vectors(data)
    if samples is None:
        rng = _rng(args)
        samples = [random_vector(rng, rng.choice(slices), args.denominator_bound)
                   for _ in range(args.samples)]
    cert = dominate_schema(schema, ref, slices, samples)
    payload = {"schema": codec.schema_to_json(schema), "reference": codec.norm_to_json(ref),
               "slices": [list(J) for J in slices], "cert": codec.domcert_to_json(cert)}
    return payload, [f"c(i, J) table {cert.table.rows}x{cert.table.cols} solved",
                     f"constants {[str(cert.constants[i]) for i in sorted(cert.constants)]}"]


def _schema_check(schema, ref, slices, raw):
    base = codec.domcert_from_json(raw)
    pc = codec.sepdom_from_json(_need(raw, "product_cert"))
    cert = SchemaDomCert(base.dominating, base.constants, base.checked_on, slices=slices,
                         product_cert=pc, reference=ref)
    ok, bad = check_schema_cert(schema_norms(schema), cert)
    payload = {"valid": ok, "counterexample": list(bad) if bad else None}
    if not ok:
        raise CheckFailed(payload, [f"schema certificate fails: {bad}"])
    return payload, [f"schema certificate holds on {len(cert.checked_on)} vectors"]


# -- topology ---------------------------------------------------------------------------

def cmd_extend_step(data, args):
    base = codec.norm_from_json(_need(data, "base"))
    cover = codec.cover_from_json(_need(data, "cover"))
    j = _int(data, "index", cover.flag.added[0] if cover.flag.added else None)
    cert, N = extend_norm_step(base, cover, j)
    return ({"epsilon": cert.epsilon, "separation": cert.separation,
             "norm": codec.norm_to_json(N), "witness": cert.witness()},
            [f"separation {cert.separation}, epsilon {cert.epsilon}"])


def _depth(data, args, default):
    if args.depth is not None:
        return args.depth
    return _int(data, "depth", default)


def cmd_extend_flag(data, args):
    base = codec.norm_from_json(_need(data, "base"))
    cover = codec.cover_from_json(_need(data, "cover"))
    depth = _depth(data, args, cover.flag.depth)
    N, certs = extension_chain(base, cover, depth)
    return ({"norm": codec.norm_to_json(N),
             "steps": [{"index": c.index, "separation": c.separation, "epsilon": c.epsilon}
                       for c in certs]},
            [f"extended {depth} steps; epsilons {[str(c.epsilon) for c in certs]}"])


def cmd_counterexample(data, args):
    if "norms" in data:
        norms = [codec.norm_from_json(N) for N in data["norms"]]
    elif "schema" in data:
        norms = schema_norms(codec.schema_from_json(data["schema"]))
    else:
        norms = [Diagonal.sup()] * _int(data, "count")
    cover = counterexample_balls(norms)
    return {"cover": codec.cover_to_json(cover)}, [f"{len(norms)} disjoint balls of radius 1/3"]


def cmd_disjoint_cert(data, args):
    cover = codec.cover_from_json(_need(data, "cover"))
    if "k" in data or "l" in data:
        pairs = [(_int(data, "k"), _int(data, "l"))]
    else:
        pairs = list(combinations([n for n, _ in cover.levels], 2))
    certs = [disjointness_certificate(cover, k, l) for k, l in pairs]
    out = [{"k": c.k, "l": c.l, "separation": c.separation, "radius_k": c.radius_k,
            "radius_l": c.radius_l, "bound": c.bound, "premise": c.premise_k and c.premise_l,
            "valid": c.valid} for c in certs]
    payload = {"certificates": out, "all_valid": all(c.valid for c in certs)}
    if not payload["all_valid"]:
        raise CheckFailed(payload, ["some pair is not certified disjoint"])
    return payload, [f"{len(certs)} pairs certified disjoint"]


def cmd_absorb(data, args):
    cand = codec.norm_from_json(_need(data, "candidate"))
    cover = codec.cover_from_json(_need(data, "cover"))
    k = _int(data, "k")
    r = codec.rational_from_json(_need(data, "r"))
    dirs = _vectors(data)
    if dirs is None:
        span = IndexSet(range(len(cover.levels) + 1))
        dirs = [FinVector.basis(j) for j in span] + _random_vectors(args, span)
    res = absorption_domination(cand, k, r, cover, dirs)
    payload = {"k": res.k, "r": res.r, "absorbed": res.absorbed, "constant": res.constant,
               "directions": res.directions, "direction": res.direction,
               "witness": res.witness}
    if res.absorbed:
        return payload, [f"N_{k} <= {res.constant} * candidate on {res.directions} directions"]
    return payload, [f"candidate ball leaves O at {res.witness}"]


def cmd_build_opening(data, args):
    cover = codec.cover_from_json(_need(data, "cover"))
    depth = _depth(data, args, cover.flag.depth)
    ref = codec.norm_from_json(data["reference"]) if "reference" in data else None
    samples = _vectors(data)
    if samples is None:
        samples = sample_cover_points(cover, depth, _rng(args), args.samples,
                                      args.denominator_bound)
    res = build_opening_norm(cover, depth, samples, ref)
    payload = {
        "norm": codec.norm_to_json(res.norm),
        "certificates": [{"sample": c.sample, "radius": c.radius, "center": c.center,
                          "contained": c.contained} for c in res.certificates],
    }
    return payload, [f"{len(res.family)} extension norms dominated",
                     f"{len(res.certificates)} sample neighbourhoods certified"]


# -- ordinals -----------------------------------------------------------------------------

def _pair(data):
    a = codec.ordinal_from_json(_need(data, "alpha" if "alpha" in data else "a"))
    b = codec.ordinal_from_json(_need(data, "beta" if "beta" in data else "b"))
    return a, b


def cmd_ord_cmp(data, args):
    a, b = _pair(data)
    result = ord_cmp(a, b)
    return {"result": result}, [f"{a} is {result} than {b}" if result != "equal" else f"{a} = {b}"]


def cmd_ord_inject(data, args):
    a, b = _pair(data)
    code = f_alpha(a, b)
    return {"code": code}, [f"f_({a})({b}) = {code}"]


def cmd_ord_F(data, args):
    a, b = _pair(data)
    value = big_F(a, b)
    return {"value": value}, [f"F({a}, {b}) = {value}"]


def cmd_ord_demo(data, args):
    ords = [codec.ordinal_from_json(o) for o in _need(data, "ordinals")]
    demo = demo_countable_domination(ords)
    return ({"ordinals": [codec.ordinal_to_json(o) for o in ords],
             "table": codec.table_to_json(demo.table), "cert": codec.sepdom_to_json(demo.cert)},
            [f"F on {len(ords)} ordinals dominated by max(G, H), G = {list(demo.cert.G)}"])


COMMANDS = {
    "sepdom-solve": cmd_sepdom_solve,
    "sepdom-check": cmd_sepdom_check,
    "sepdom-convert": cmd_sepdom_convert,
    "norm-eval": cmd_norm_eval,
    "norm-axioms": cmd_norm_axioms,
    "equiv-constant": cmd_equiv_constant,
    "dominate": cmd_dominate,
    "schema-build": cmd_schema_build,
    "schema-dominate": cmd_schema_dominate,
    "extend-step": cmd_extend_step,
    "extend-flag": cmd_extend_flag,
    "counterexample": cmd_counterexample,
    "disjoint-cert": cmd_disjoint_cert,
    "absorb": cmd_absorb,
    "build-opening": cmd_build_opening,
    "ord-cmp": cmd_ord_cmp,
    "ord-inject": cmd_ord_inject,
    "ord-F": cmd_ord_F,
    "ord-demo": cmd_ord_demo,
}


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _non_negative_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-", help="input JSON path (default stdin)")
    common.add_argument("--output", default="-", help="output JSON path (default stdout)")
    common.add_argument("--depth", type=_non_negative_int)
    common.add_argument("--samples", type=_non_negative_int, default=20)
    common.add_argument("--seed", type=_non_negative_int, default=0)
    common.add_argument("--denominator-bound", type=_positive_int, default=64)
    common.add_argument("--summary", action="store_true", help="append a readable digest")
    parser = argparse.ArgumentParser(prog="normdom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__name__[4:].replace("_", " "))
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK

    handler = COMMANDS[args.command]
    code = EXIT_OK
    try:
        data = _read(args.input)
        payload, summary = handler(data, args)
        payload = {"command": args.command, "status": "ok", **payload}
    except CheckFailed as fail:
        code = EXIT_PRECONDITION
        payload = {"command": args.command, "status": "failed", **fail.payload}
        summary = fail.summary
    except PreconditionError as exc:
        code = EXIT_PRECONDITION
        payload = {"command": args.command, "status": "precondition-failed",
                   "error": type(exc).__name__, "message": str(exc),
                   "diagnostic": exc.diagnostic}
        summary = [str(exc)]
    except (MalformedInputError, KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(f"normdom {args.command}: malformed input: {exc}\n")
        return EXIT_MALFORMED

    text = _dump(payload)
    _write(args.output, text)
    if args.summary:
        sys.stdout.write("".join(f"# {line}\n" for line in summary))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
