"""Command-line entry point: ``endocert analyze | module | group | divisor | cycletypes``.

Exit codes: 0 conclusion reached (or plain query answered), 1 input error,
2 no rule applies, 3 no rule applies because an oracle ran out of budget.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import __version__, permmod
from .catalog import catalog_group
from .galois import (PolynomialSyntaxError, classify_heuristic, cycle_types, discriminant,
                     is_square, parse_polynomial, primes_up_to)
from .jacinv import JacContext, jacobian_dim, multiplicity_gcd
from .linalg import is_prime
from .lowindex import has_proper_subgroup_of_index_dividing
from .permgrp import (BudgetExceeded, CycleSyntaxError, PermGroup, conjugacy_classes,
                      cycle_type, format_cycles, has_proper_normal_subgroup_of_index_dividing)
from .permmod import Kind, KindUnavailable
from .superdiv import BranchDivisor, CurveParams, class_group, divisor_class, is_principal
from .verdict import FORMAT_VERSION, NO_RULE, Budgets, ProblemSpec, evaluate, explain

EXIT_OK, EXIT_INPUT, EXIT_NO_RULE, EXIT_BLOCKED = 0, 1, 2, 3

_CATALOG_NAME = re.compile(r"[A-Z][A-Za-z0-9_]*")
_SPEC_KEYS = {"version", "n", "p", "r", "q", "char", "zeta", "group", "polynomial", "max_prime"}


class InputError(ValueError):
    pass


def resolve_group(text: str, n: int | None = None) -> PermGroup:
    """A catalog name (S5, PSL2_7, M11, ...) or generators in cycle notation."""
    text = text.strip()
    if _CATALOG_NAME.fullmatch(text):
        try:
            G = catalog_group(text)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from exc
        if n is not None and G.degree != n:
            raise InputError(f"group {text} has degree {G.degree}, expected {n}")
        return G
    return PermGroup.from_cycles(text, n)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"{name}={raw!r} is not an integer") from exc


def budgets_from(args) -> Budgets:
    base = Budgets()
    enum = args.budget_enum if args.budget_enum is not None else _env_int("ENDOCERT_BUDGET_ENUM", base.enum)
    back = (args.budget_backtrack if args.budget_backtrack is not None
            else _env_int("ENDOCERT_BUDGET_BACKTRACK", base.backtrack))
    seed = args.seed if args.seed is not None else _env_int("ENDOCERT_SEED", base.seed)
    if enum < 1 or back < 1:
        raise InputError("budgets must be positive")
    return Budgets(enum, back, seed)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(args, payload: dict, text: str):
    print(_dump(payload) if args.format == "json" else text)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _prime_power(q: int) -> tuple:
    for p in range(2, q + 1):
        if q % p == 0:
            r = 0
            while q % p == 0:
                q //= p
                r += 1
            if q != 1:
                break
            return p, r
    raise InputError("q must be a prime power")


def spec_from_document(doc: dict, budgets: Budgets, assume_group: str | None = None) -> ProblemSpec:
    if not isinstance(doc, dict):
        raise InputError("input document must be an object")
    unknown = set(doc) - _SPEC_KEYS
    if unknown:
        raise InputError(f"unknown field(s): {', '.join(sorted(unknown))}")
    version = doc.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported version {version!r}")
    if "q" in doc:
        p, r = _prime_power(int(doc["q"]))
        if ("p" in doc and doc["p"] != p) or ("r" in doc and doc["r"] != r):
            raise InputError("q is inconsistent with p and r")
    elif "p" in doc:
        p, r = int(doc["p"]), int(doc.get("r", 1))
    else:
        raise InputError("one of p or q is required")
    char = doc.get("char", 0)
    hint = None
    poly = None
    if doc.get("polynomial") is not None:
        raw = doc["polynomial"]
        text = ", ".join(str(c) for c in raw) if isinstance(raw, list) else str(raw)
        poly = parse_polynomial(text)
        ev = cycle_types(poly, primes_up_to(int(doc.get("max_prime", 100))))
        hint = classify_heuristic(ev, is_square(discriminant(poly)))
    n = doc.get("n", poly.degree if poly else None)
    if n is None:
        raise InputError("n is required when no polynomial is given")
    if poly is not None and poly.degree != n:
        raise InputError(f"polynomial has degree {poly.degree}, expected n = {n}")
    try:
        ctx = JacContext(int(n), p, r, None if char is None else int(char), bool(doc.get("zeta", False)))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    group_text = assume_group or doc.get("group")
    group = resolve_group(group_text, ctx.n) if group_text else None
    if group is not None and poly is not None:
        _check_against_evidence(group, ev, budgets)
    return ProblemSpec(ctx, group, hint, budgets)


def _check_against_evidence(G: PermGroup, ev, budgets: Budgets):
    """Every observed Frobenius cycle type must occur in the assumed group."""
    try:
        present = {cycle_type(c[0]) for c in conjugacy_classes(G, budgets.enum)}
    except BudgetExceeded:
        return
    missing = [pat for pat in ev.observed if pat not in present]
    if missing:
        raise InputError(f"assumed group has no element of cycle type {missing[0]}")


def _exit_code(cert) -> int:
    if cert.conclusion != NO_RULE:
        return EXIT_OK
    return EXIT_BLOCKED if cert.unknown_blocked else EXIT_NO_RULE


def _analyze_text(text: str, budgets: Budgets, assume_group: str | None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return evaluate(spec_from_document(doc, budgets, assume_group))


def cmd_analyze(args) -> int:
    budgets = budgets_from(args)
    if args.batch:
        return _analyze_batch(args, budgets)
    if args.input is None:
        raise InputError("an input file (or '-') is required unless --batch is given")
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    cert = _analyze_text(text, budgets, args.assume_group)
    _emit(args, cert.to_dict(), explain(cert))
    return _exit_code(cert)


def _analyze_batch(args, budgets: Budgets) -> int:
    files = sorted(Path(args.batch).glob("*.json"))
    results = []
    codes = []
    for path in files:
        try:
            cert = _analyze_text(path.read_text(), budgets, args.assume_group)
        except (InputError, CycleSyntaxError, PolynomialSyntaxError, ValueError) as exc:
            results.append({"file": path.name, "error": str(exc)})
            codes.append(EXIT_INPUT)
            continue
        results.append({"file": path.name, "certificate": cert.to_dict(), "text": explain(cert)})
        codes.append(_exit_code(cert))
    if args.format == "json":
        print(_dump({"version": FORMAT_VERSION,
                     "results": [{k: v for k, v in r.items() if k != "text"} for r in results]}))
    else:
        for r in results:
            print(f"== {r['file']}")
            print(r.get("text", "error: " + r.get("error", "")))
    if EXIT_INPUT in codes:
        return EXIT_INPUT
    return max(codes, default=EXIT_OK)


# ---------------------------------------------------------------------------
# module / group / divisor / cycletypes
# ---------------------------------------------------------------------------

def cmd_module(args) -> int:
    G = resolve_group(args.group, args.n)
    if not is_prime(args.ell):
        raise InputError(f"ell = {args.ell} is not prime")
    M = permmod.build_module(G, args.ell, Kind.parse(args.kind))
    budgets = budgets_from(args)
    out = {"version": FORMAT_VERSION, "kind": M.kind.value, "ell": M.ell, "dim": M.dim,
           "query": args.query}
    if args.query == "commutant":
        C = permmod.commutant(M)
        out.update(commutant_dim=C.dim, scalars_only=C.is_scalars_only, is_field=C.is_field)
        text = f"commutant dim {C.dim}, scalars only {C.is_scalars_only}, field {C.is_field}"
    elif args.query == "faithful":
        out["faithful"] = permmod.is_faithful(M, budgets.enum)
        text = f"faithful {out['faithful']}"
    elif args.query == "irreducible":
        sub = permmod.find_submodule(M, budgets.seed, exhaustive_budget=budgets.enum)
        absolute = sub is None and permmod.commutant(M).is_scalars_only
        out.update(irreducible=sub is None, absolutely_irreducible=absolute,
                   submodule_dim=None if sub is None else len(sub))
        text = f"irreducible {sub is None}, absolutely irreducible {absolute}"
    else:
        lat = permmod.submodule_lattice(M, budgets.enum)
        out["submodule_dims"] = [len(s) for s in lat]
        text = f"{len(lat)} submodules, dimensions {out['submodule_dims']}"
    _emit(args, out, text)
    return EXIT_OK


def _oracle_payload(ans) -> dict:
    d = {"answer": ans.status, "note": ans.note}
    if ans.witness is not None:
        d["witness"] = {"index": ans.witness.index,
                        "action": [format_cycles(a) for a in ans.witness.action]}
    return d


def cmd_group(args) -> int:
    G = resolve_group(args.group, args.n)
    budgets = budgets_from(args)
    out = {"version": FORMAT_VERSION, "degree": G.degree, "query": args.query}
    if args.query == "order":
        out["order"] = G.order()
        text = f"order {out['order']}"
    elif args.query == "transitivity":
        out["transitivity_degree"] = G.transitivity_degree()
        text = f"transitivity degree {out['transitivity_degree']}"
    elif args.query in ("index-oracle", "normal-oracle"):
        if args.d is None:
            raise InputError(f"{args.query} needs --d")
        if args.query == "index-oracle":
            ans = has_proper_subgroup_of_index_dividing(G, args.d, budgets.enum, budgets.backtrack)
        else:
            ans = has_proper_normal_subgroup_of_index_dividing(G, args.d, budgets.enum)
        out.update(d=args.d, **_oracle_payload(ans))
        text = f"{ans.status} ({ans.note})"
    else:
        classes = conjugacy_classes(G, budgets.enum)
        out["classes"] = [{"representative": format_cycles(c[0]), "size": len(c),
                           "cycle_type": list(cycle_type(c[0]))} for c in classes]
        text = "\n".join(f"{c['size']:>8}  {c['representative']}" for c in out["classes"])
    _emit(args, out, text)
    return EXIT_OK


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError as exc:
        raise InputError(f"bad integer list {text!r}") from exc


def cmd_divisor(args) -> int:
    p, r = _prime_power(args.q)
    params = CurveParams(args.n, p, r)
    out = {"version": FORMAT_VERSION, "n": args.n, "q": args.q, "query": args.query}
    if args.query == "class-group":
        cg = class_group(params)
        out.update(invariant_factors=list(cg.invariant_factors),
                   lambda_torsion_dim=cg.lambda_torsion_dim)
        text = f"invariant factors {list(cg.invariant_factors)}, lambda-torsion dim {cg.lambda_torsion_dim}"
    else:
        if args.coeffs is None:
            raise InputError(f"{args.query} needs --coeffs")
        D = BranchDivisor(params, _int_list(args.coeffs))
        if args.query == "principal":
            res = is_principal(D)
            out["principal"] = res.principal
            if res.witness:
                out["witness"] = {"D0": list(res.witness.D0), "j": res.witness.j,
                                  "Q": res.witness.Q + 1}
            text = f"principal {res.principal}" + (
                f", D = {args.q}*{list(res.witness.D0)} + {res.witness.j}*(sum P - {args.n} P_{args.n})"
                if res.witness else "")
        else:
            cls = divisor_class(D)
            out.update(key=list(cls.key), representative=list(cls.representative.coeffs),
                       is_zero=cls.is_zero)
            text = f"class key {list(cls.key)}, representative {list(cls.representative.coeffs)}"
    _emit(args, out, text)
    return EXIT_OK


def cmd_cycletypes(args) -> int:
    f = parse_polynomial(args.polynomial)
    ev = cycle_types(f, primes_up_to(args.max_prime))
    disc = discriminant(f)
    hint = classify_heuristic(ev, is_square(disc))
    out = {"version": FORMAT_VERSION, "polynomial": str(f), "degree": f.degree,
           "discriminant": disc, "discriminant_is_square": is_square(disc),
           "records": [{"prime": rec.prime, "status": rec.status, "pattern": list(rec.pattern)}
                       for rec in ev.records],
           "observed": [list(pat) for pat in ev.observed],
           "hint": {"label": hint.label, "reasons": list(hint.reasons), "certified": False}}
    lines = [f"f = {f}, disc = {disc}"]
    for rec in ev.records:
        lines.append(f"{rec.prime:>6}  {rec.status:<10}  {' '.join(map(str, rec.pattern))}")
    lines.append(f"hint (uncertified): {hint.label}; " + "; ".join(hint.reasons))
    _emit(args, out, "\n".join(lines))
    return EXIT_OK


def cmd_invariants(args) -> int:
    p, r = _prime_power(args.q)
    ctx = JacContext(args.n, p, r, 0)
    jd = jacobian_dim(ctx)
    mult = multiplicity_gcd(ctx) if not (ctx.case == "iii" and ctx.n < 5) else None
    out = {"version": FORMAT_VERSION, "n": args.n, "q": args.q, "case": ctx.case,
           "two_dim": jd.two_dim, "dim": jd.dim, "d": jd.d_value,
           "multiplicity": None if mult is None else str(mult)}
    _emit(args, out, f"case {ctx.case}: 2 dim = {jd.two_dim}, dim = {jd.dim}, multiplicity {mult}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(sp):
    sp.add_argument("--budget-enum", type=int, default=None, help="element/class enumeration budget")
    sp.add_argument("--budget-backtrack", type=int, default=None, help="low-index search node budget")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="endocert", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"endocert {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="evaluate all rules on a problem document")
    a.add_argument("input", nargs="?", help="JSON problem document, or '-' for stdin")
    a.add_argument("--assume-group", default=None,
                   help="group (catalog name or cycles) asserted to be Gal(f)")
    a.add_argument("--batch", default=None, help="directory of *.json problem documents")
    _common(a)

    m = sub.add_parser("module", help="permutation module queries")
    m.add_argument("query", choices=("commutant", "faithful", "irreducible", "lattice"))
    m.add_argument("--group", required=True)
    m.add_argument("--n", type=int, default=None, help="degree, if larger than the largest moved point")
    m.add_argument("--ell", type=int, required=True)
    m.add_argument("--kind", default="zerosum", help="full | zerosum | heart | quotient")
    _common(m)

    g = sub.add_parser("group", help="permutation group queries")
    g.add_argument("query", choices=("order", "transitivity", "index-oracle", "normal-oracle", "classes"))
    g.add_argument("--group", required=True)
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--d", type=int, default=None)
    _common(g)

    d = sub.add_parser("divisor", help="branch divisor arithmetic (q | n)")
    d.add_argument("query", choices=("principal", "class", "class-group"))
    d.add_argument("--q", type=int, required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--coeffs", default=None, help="comma-separated integer coefficients")
    _common(d)

    c = sub.add_parser("cycletypes", help="Frobenius cycle types of an integer polynomial")
    c.add_argument("polynomial")
    c.add_argument("--max-prime", type=int, default=100)
    _common(c)

    i = sub.add_parser("invariants", help="dimension and multiplicity of J^(f,q)")
    i.add_argument("--n", type=int, required=True)
    i.add_argument("--q", type=int, required=True)
    _common(i)
    return ap


COMMANDS = {"analyze": cmd_analyze, "module": cmd_module, "group": cmd_group,
            "divisor": cmd_divisor, "cycletypes": cmd_cycletypes, "invariants": cmd_invariants}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CycleSyntaxError, PolynomialSyntaxError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BLOCKED
    except (InputError, KindUnavailable, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
