"""Command-line interface.

Output is ``key = value`` lines sorted by key, or one JSON document with
``--json``.  Exit status: 0 success, 1 domain error, 2 usage or input-format
error, 3 resource cap reached.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .divisors import (
    format_label,
    format_rational,
    iota_star,
    label_from_json,
    picard,
    pi1_variety,
    pi2_lattice,
    support_lattice,
)
from .errors import InputFormatError, ResourceLimitError, ToricError
from .fan import CATALOG, Fan, catalog, fan_from_json, fan_to_json, minimal_nonfaces
from .maps import (
    Configuration,
    check_relations,
    config_from_map,
    embedding_tuple,
    monomial_data,
    polys_from_json,
    positive_generators,
    singular_representation,
    validate_map,
    verify_embedding,
)
from .monoid import SEMANTICS, PartialMonoid
from .qspace import pi0_certificate, pi0_oracle, pi1_presentation
from .resolve import ResolutionChain, chain_from_json, chain_to_data, desingularize, pushforward_Tstar
from .stability import stability_chained, stability_smooth

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str, stdin) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None


def _json_file(path: str, stdin):
    try:
        return json.loads(_read(path, stdin))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc}") from None


def _vec(v) -> str:
    return "(" + ", ".join(format_rational(Fraction(x)) for x in v) + ")"


def _natural(key: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", key)]


def _emit(out, data: dict, as_json: bool) -> None:
    if as_json:
        out.write(json.dumps(data, sort_keys=True) + "\n")
        return
    for k in sorted(data, key=_natural):
        v = data[k]
        if isinstance(v, bool):
            v = "true" if v else "false"
        out.write(f"{k} = {v}\n")


# -- verbs -------------------------------------------------------------------


def _load_fan(args, stdin) -> Fan:
    f = fan_from_json(_read(args.fan, stdin))
    f.report
    return f


def _load_chain(args, f: Fan, stdin) -> ResolutionChain:
    if getattr(args, "chain", None):
        return chain_from_json(f, _read(args.chain, stdin))
    return desingularize(f)


def cmd_catalog(args, out, stdin):
    try:
        params = [int(p) for p in args.params]
    except ValueError:
        raise UsageError("catalog parameters must be integers") from None
    f = catalog(args.name, *params)
    out.write(fan_to_json(f))


def cmd_fan_validate(args, out, stdin):
    f = _load_fan(args, stdin)
    r = f.report
    _emit(out, {"valid": True, "complete": r.is_complete, "simplicial": r.is_simplicial, "smooth": r.is_smooth}, args.json)


def cmd_fan_info(args, out, stdin):
    f = _load_fan(args, stdin)
    r = f.report
    data = {
        "name": f.label(),
        "rank": f.rank,
        "rays": f.nrays,
        "maximal cones": len(f.max_cones),
        "complete": r.is_complete,
        "simplicial": r.is_simplicial,
        "smooth": r.is_smooth,
        "minimal nonfaces": json.dumps([list(s) for s in minimal_nonfaces(f)]),
    }
    for i, idx in enumerate(f.max_cones):
        data[f"cone {i}"] = json.dumps(list(idx))
        if i in r.multiplicities:
            data[f"multiplicity {i}"] = r.multiplicities[i]
    if r.multiplicities:
        data["multiplicity(max)"] = max(r.multiplicities.values())
    if f.lattice_note:
        data["lattice note"] = f.lattice_note
    _emit(out, data, args.json)


def cmd_fan_resolve(args, out, stdin):
    f = _load_fan(args, stdin)
    chain = desingularize(f)
    if args.json:
        out.write(json.dumps(chain_to_data(chain)) + "\n")
        return
    data = {"steps": len(chain.steps), "final rays": json.dumps([list(v) for v in chain.final_fan.rays])}
    for n, s in enumerate(chain.steps, 1):
        if s.is_refinement:
            data[f"step {n}"] = "refine to simplicial cones"
        else:
            coeffs = ", ".join(format_rational(c) for c in s.coefficients)
            data[f"step {n}"] = f"insert {_vec(s.inserted_ray)} into cone {list(s.parent_cone)} with coefficients ({coeffs})"
    data["final smooth"] = chain.final_fan.report.is_smooth
    _emit(out, data, False)


def cmd_divisors(args, out, stdin):
    f = _load_fan(args, stdin)
    data: dict = {}
    if args.what == "sf":
        sl = support_lattice(f)
        data["rank"] = sl.rank
        data["pivots"] = json.dumps(list(sl.pivots))
        for i, row in enumerate(sl.basis.rows):
            data[f"basis {i}"] = _vec(row)
        data["iota* rows"] = json.dumps([list(r) for r in iota_star(f).rows])
    elif args.what == "pic":
        data["picard"] = str(picard(f))
    elif args.what == "pi2":
        lat = pi2_lattice(f)
        data["rank"] = lat.rank
        for i, g in enumerate(lat.rows):
            data[f"generator {i}"] = _vec(g)
    else:
        data["pi1"] = str(pi1_variety(f))
    _emit(out, data, args.json)


def cmd_labels_simples(args, out, stdin):
    f = _load_fan(args, stdin)
    pm = PartialMonoid(f, args.semantics)
    simples = pm.simple_labels()
    data = {"count": len(simples), "semantics": args.semantics}
    for i, s in enumerate(simples):
        data[f"simple {i}"] = format_label(s)
    _emit(out, data, args.json)


def _divisor(args, f: Fan, stdin):
    if not args.divisor:
        raise UsageError("--divisor is required")
    D = label_from_json(_read(args.divisor, stdin))
    if len(D) != f.nrays:
        raise InputFormatError(f"divisor has {len(D)} coordinates but the fan has {f.nrays} rays")
    return D


def cmd_q(args, out, stdin):
    f = _load_fan(args, stdin)
    pm = PartialMonoid(f, args.semantics)
    data: dict = {"semantics": args.semantics}
    if args.what == "pi0":
        D = _divisor(args, f, stdin)
        res = pi0_oracle(pm, D, args.max_vertices)
        data["components"] = res.components
        data["vertices"] = res.vertices
        for i, rep in enumerate(res.representatives):
            data[f"representative {i}"] = " + ".join(format_label(x) for x in rep) or "()"
        if not args.no_certificate and res.components == 1:
            cert = pi0_certificate(pm, D)
            data["certificate"] = "none found" if cert is None else ", ".join(format_label(c) for c in cert)
    else:
        pres = pi1_presentation(pm)
        data["generators"] = len(pres.generators)
        data["abelian"] = True
        for n, ((i, j), o) in enumerate(zip(pres.generators, pres.orders)):
            order = "infinite" if o == math.inf else str(o)
            data[f"generator {n}"] = f"{format_label(pres.simples[i])} + {format_label(pres.simples[j])}, order {order}"
    _emit(out, data, args.json)


def cmd_stability(args, out, stdin):
    f = _load_fan(args, stdin)
    D = _divisor(args, f, stdin)
    if f.report.is_smooth and not args.chain:
        res = stability_smooth(f, D)
        chain_len = 0
    else:
        chain = _load_chain(args, f, stdin)
        res = stability_chained(chain, D)
        chain_len = len(chain.steps)
    method = res.method
    if chain_len > 1:
        method += " (extrapolated rate recurrence)"
    data = {"n(D)": res.n, "method": method, "active term": res.active}
    if res.j is not None:
        data["witness"] = f"j = {res.j}, inserted degree = {format_rational(res.degree)}"
    for k, v in res.terms.items():
        data[f"term {k}"] = v
    _emit(out, data, args.json)


def _map_polys(args, stdin):
    return polys_from_json(_read(args.map, stdin))


def cmd_map(args, out, stdin):
    f = _load_fan(args, stdin)
    polys = _map_polys(args, stdin)
    data: dict = {}
    if args.what == "check":
        m = validate_map(f, polys, require_kernel=not args.any_degree)
        data["valid"] = True
        data["degree"] = _vec(m.degree_label)
    elif args.what == "scan":
        m = validate_map(f, polys, require_kernel=not args.any_degree)
        c: Configuration = config_from_map(m)
        data["points"] = len(c.points)
        for i, (z, lab) in enumerate(c.points):
            data[f"point {i}"] = f"{z} : {format_label(lab)}"
    elif args.what == "embed":
        if not args.embedding:
            raise UsageError("--embedding is required")
        emb_file = _json_file(args.embedding, stdin)
        if not isinstance(emb_file, dict) or "exponents" not in emb_file or set(emb_file) - {"exponents", "relations"}:
            raise InputFormatError('embedding file is {"exponents": [...], "relations": [...]}')
        emb = monomial_data(f, emb_file["exponents"], emb_file.get("relations", ()))
        m = validate_map(f, polys, require_kernel=not args.any_degree)
        check = verify_embedding(emb, m)
        data["relations hold"] = bool(check)
        for i, p in enumerate(embedding_tuple(emb, m)):
            data[f"coordinate {i}"] = str(p)
        for fail in check.failures:
            data[f"counterexample {fail.relation}"] = f"coefficient of z^{fail.degree}: {fail.lhs} != {fail.rhs}"
    else:
        chain = _load_chain(args, f, stdin)
        if args.generators:
            gen_file = _json_file(args.generators, stdin)
            if not isinstance(gen_file, dict) or set(gen_file) - {"generators", "relations"} or "generators" not in gen_file:
                raise InputFormatError('generators file is {"generators": [...], "relations": [...]}')
            gens = gen_file["generators"]
            rels = gen_file.get("relations", ())
        else:
            gens, rels = positive_generators(f), ()
        m = validate_map(chain.final_fan, polys, require_kernel=False)
        D = pushforward_Tstar(chain, m.degree_label)
        qs = singular_representation(chain, gens, m)
        data["degree"] = _vec(D)
        for i, (t, q) in enumerate(zip(gens, qs)):
            data[f"q {i}"] = f"{q}    [tau = {_vec(t)}]"
        if rels:
            data["relations hold"] = bool(check_relations(qs, rels))
    _emit(out, data, args.json)


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toric", description="Toric varieties, labels and spaces of rational curves.")
    p.add_argument("--json", action="store_true", help="emit one JSON document")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", help="print a catalog fan as JSON")
    c.add_argument("name", choices=sorted(CATALOG))
    c.add_argument("params", nargs="*")
    c.set_defaults(func=cmd_catalog)

    f = sub.add_parser("fan", help="validate, describe or resolve a fan")
    fs = f.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, fn in (("validate", cmd_fan_validate), ("info", cmd_fan_info), ("resolve", cmd_fan_resolve)):
        a = fs.add_parser(name)
        a.add_argument("fan")
        a.set_defaults(func=fn)

    d = sub.add_parser("divisors", help="support lattice and topology invariants")
    d.add_argument("what", choices=["sf", "pic", "pi2", "pi1x"])
    d.add_argument("fan")
    d.set_defaults(func=cmd_divisors)

    lab = sub.add_parser("labels", help="simple labels")
    ls = lab.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = ls.add_parser("simples")
    s.add_argument("fan")
    s.add_argument("--semantics", choices=SEMANTICS, default="resolution")
    s.set_defaults(func=cmd_labels_simples)

    q = sub.add_parser("q", help="components and fundamental group of label spaces")
    q.add_argument("what", choices=["pi0", "pi1"])
    q.add_argument("fan")
    q.add_argument("--divisor")
    q.add_argument("--semantics", choices=SEMANTICS, default="resolution")
    q.add_argument("--max-vertices", type=int)
    q.add_argument("--no-certificate", action="store_true")
    q.set_defaults(func=cmd_q)

    st = sub.add_parser("stability", help="stability dimension n(D)")
    st.add_argument("fan")
    st.add_argument("--divisor")
    st.add_argument("--chain")
    st.set_defaults(func=cmd_stability)

    m = sub.add_parser("map", help="polynomial tuples")
    m.add_argument("what", choices=["check", "scan", "embed", "represent"])
    m.add_argument("map")
    m.add_argument("--fan", required=True)
    m.add_argument("--embedding")
    m.add_argument("--generators")
    m.add_argument("--chain")
    m.add_argument("--any-degree", action="store_true", help="skip the ker iota* check")
    m.set_defaults(func=cmd_map)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None, stdin=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    stdin = stdin or sys.stdin
    argv = list(sys.argv[1:] if argv is None else argv)
    # the global flag may follow the verb
    as_json = "--json" in argv
    argv = [a for a in argv if a != "--json"]
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:
            # --help
            return int(exc.code or 0)
        args.json = as_json
        buf = _Buffer()
        args.func(args, buf, stdin)
        out.write(buf.text())
        return EXIT_OK
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except InputFormatError as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_USAGE
    except ResourceLimitError as exc:
        err.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except ToricError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN


class _Buffer:
    """Collect output so nothing is printed when a command fails midway."""

    def __init__(self):
        self.parts: list[str] = []

    def write(self, s: str) -> None:
        self.parts.append(s)

    def text(self) -> str:
        return "".join(self.parts)


def main() -> None:
    sys.exit(run())
