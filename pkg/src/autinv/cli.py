"""Command-line frontend.

Exit codes: 0 invertible / identities hold, 2 not invertible (either kind)
or identities fail, 3 degree bound above ``--max-order``, 1 usage or parse
error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from .corpus import format_recipe, random_recipe, realize
from .inverter import (
    BoundExceeded,
    Invertible,
    NotInvertibleComposition,
    NotInvertibleJacobian,
    SolveConfig,
    Verdict,
    Witness,
    decide_invertible,
    degree_bound,
    solve_series,
    verify_mutual_inverse,
)
from .linalg import determinant, jacobian
from .parsing import ParseError, parse_map, parse_polynomial
from .poly import PolyMap, format_polynomial, map_degree
from .series import SeriesVec, TruncSeries, format_series

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_INVERTIBLE = 2
EXIT_BOUND = 3


def exit_code(verdict: Verdict) -> int:
    if isinstance(verdict, Invertible):
        return EXIT_OK
    if isinstance(verdict, (NotInvertibleJacobian, NotInvertibleComposition)):
        return EXIT_NOT_INVERTIBLE
    if isinstance(verdict, BoundExceeded):
        return EXIT_BOUND
    raise TypeError(f"not a verdict: {verdict!r}")


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_map(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    try:
        return parse_map(text)
    except ValueError as err:
        raise UsageError(f"{path}: {err}") from None


# -- structured output ---------------------------------------------------------


def verdict_document(verdict: Verdict, F: PolyMap, names: Sequence[str], timings: dict | None = None) -> dict:
    def fmt(p):
        return format_polynomial(p, names)

    det = determinant(jacobian(F))
    doc: dict = {
        "verdict": type(verdict).__name__,
        "variables": list(names),
        "map": [fmt(p) for p in F.components],
        "determinant": fmt(det),
    }
    try:
        doc["bound"] = degree_bound(F)
    except ValueError:
        doc["bound"] = None
    if isinstance(verdict, Invertible):
        doc["inverse"] = [fmt(p) for p in verdict.inverse.components]
        doc["series"] = [[fmt(c) for c in s.coeffs] for s in verdict.series.components]
    elif isinstance(verdict, NotInvertibleJacobian):
        doc["determinant"] = fmt(verdict.determinant)
    elif isinstance(verdict, NotInvertibleComposition):
        w = verdict.witness
        doc["witness"] = {
            "identity": w.identity,
            "index": w.index,
            "leading_term": fmt(w.leading_term),
        }
        doc["order"] = verdict.order
        doc["bound"] = verdict.bound
    elif isinstance(verdict, BoundExceeded):
        doc["required"] = verdict.required
        doc["cap"] = verdict.cap
    doc["timings"] = timings or {}
    return doc


def verdict_from_document(doc: dict) -> Verdict:
    """Rebuild the verdict a ``verdict_document`` was made from."""
    names = doc["variables"]

    def parse(text):
        return parse_polynomial(text, names)

    kind = doc["verdict"]
    if kind == "Invertible":
        series = SeriesVec(TruncSeries([parse(c) for c in comp]) for comp in doc["series"])
        return Invertible(PolyMap(parse(p) for p in doc["inverse"]), series)
    if kind == "NotInvertibleJacobian":
        return NotInvertibleJacobian(parse(doc["determinant"]))
    if kind == "NotInvertibleComposition":
        w = doc["witness"]
        return NotInvertibleComposition(
            Witness(w["identity"], w["index"], parse(w["leading_term"])), doc["order"], doc["bound"]
        )
    if kind == "BoundExceeded":
        return BoundExceeded(doc["required"], doc["cap"])
    raise ValueError(f"unknown verdict {kind!r}")


def _print_verdict_text(verdict: Verdict, doc: dict, out) -> None:
    print(f"verdict: {doc['verdict']}", file=out)
    print(f"determinant: {doc['determinant']}", file=out)
    if doc.get("bound") is not None:
        print(f"bound: {doc['bound']}", file=out)
    if isinstance(verdict, Invertible):
        print(f"inverse: {'; '.join(doc['inverse'])}", file=out)
    elif isinstance(verdict, NotInvertibleComposition):
        w = doc["witness"]
        print(
            f"witness: identity {w['identity']} component {w['index'] + 1}, "
            f"residual leading term {w['leading_term']} (order {doc['order']})",
            file=out,
        )
    elif isinstance(verdict, BoundExceeded):
        print(f"required order {verdict.required} exceeds --max-order {verdict.cap}", file=out)


# -- subcommands ---------------------------------------------------------------


def cmd_jacobian(args, out) -> int:
    parsed = _read_map(args.mapfile)
    J = jacobian(parsed.components)
    print(J.format(parsed.variables), file=out)
    print(f"det: {format_polynomial(determinant(J), parsed.variables)}", file=out)
    return EXIT_OK


def cmd_series(args, out) -> int:
    parsed = _read_map(args.mapfile)
    init = None
    if args.init:
        init_parsed = _read_map(args.init)
        if init_parsed.components.arity != parsed.components.arity:
            raise UsageError("--init map has a different number of variables")
        init = init_parsed.components
    try:
        S = solve_series(parsed.components, args.order, init)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NOT_INVERTIBLE
    for i, s in enumerate(S.components):
        print(f"U{i + 1} = {format_series(s, parsed.variables)}", file=out)
    return EXIT_OK


def cmd_invert(args, out) -> int:
    parsed = _read_map(args.mapfile)
    F = parsed.components
    cfg = SolveConfig(
        max_order=args.max_order,
        eager_check=args.eager,
        random_precheck=not args.no_precheck,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    verdict = decide_invertible(F, cfg)
    timings = {"decide_seconds": round(time.perf_counter() - t0, 6)}
    doc = verdict_document(verdict, F, parsed.variables, timings)
    if args.json:
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        _print_verdict_text(verdict, doc, out)
    return exit_code(verdict)


def cmd_verify(args, out) -> int:
    F = _read_map(args.mapfile)
    A = _read_map(args.invfile)
    if F.components.arity != A.components.arity:
        raise UsageError("maps have different numbers of variables")
    ok = verify_mutual_inverse(F.components, A.components)
    print("mutual inverses: yes" if ok else "mutual inverses: no", file=out)
    return EXIT_OK if ok else EXIT_NOT_INVERTIBLE


def cmd_gen_corpus(args, out) -> int:
    if args.m < 2:
        raise UsageError("--m must be at least 2")
    if args.steps < 0 or args.count < 0:
        raise UsageError("--steps and --count must be non-negative")
    records = []
    for k in range(args.count):
        recipe = random_recipe(args.m, args.steps, args.max_h_degree, args.seed + k, args.max_degree)
        F, A = realize(recipe)
        records.append((recipe, F, A))
    if args.json:
        docs = [
            {
                "seed": r.seed,
                "recipe": format_recipe(r),
                "map": [format_polynomial(p) for p in F.components],
                "inverse": [format_polynomial(p) for p in A.components],
                "degree": map_degree(F),
            }
            for r, F, A in records
        ]
        json.dump(docs, out, indent=2)
        out.write("\n")
        return EXIT_OK
    for r, F, A in records:
        out.write(format_recipe(r))
        print(f"# map: {'; '.join(map(format_polynomial, F.components))}", file=out)
        print(f"# inverse: {'; '.join(map(format_polynomial, A.components))}", file=out)
        print(file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="autinv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    s = sub.add_parser("jacobian", help="print the Jacobian matrix and its determinant")
    s.add_argument("mapfile")
    s.set_defaults(func=cmd_jacobian)

    s = sub.add_parser("series", help="print the truncated series solution")
    s.add_argument("mapfile")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--init", help="map file with the initial values U(0)")
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("invert", help="decide invertibility and print the inverse")
    s.add_argument("mapfile")
    s.add_argument("--max-order", type=int, default=64)
    s.add_argument("--eager", action="store_true", help="try the partial inverse after every order")
    s.add_argument("--no-precheck", action="store_true", help="skip random-point screening")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("verify", help="check that two maps are mutually inverse")
    s.add_argument("mapfile")
    s.add_argument("invfile")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen-corpus", help="emit random tame automorphisms with their inverses")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--max-h-degree", type=int, default=3)
    s.add_argument("--max-degree", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_gen_corpus)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "order", 0) is not None and getattr(args, "order", 0) < 0:
            raise UsageError("--order must be non-negative")
        if getattr(args, "max_order", 1) < 1:
            raise UsageError("--max-order must be at least 1")
        return args.func(args, out)
    except UsageError as err:
        print(str(err), file=sys.stderr)
        return EXIT_USAGE
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())
