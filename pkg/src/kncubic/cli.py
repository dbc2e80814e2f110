"""Command-line interface: tables, brackets, degenerations, verification.

Output goes to stdout (or --out PATH); findings and errors go to stderr.
Exit codes: 0 success / verification pass, 1 verification failure, 2 usage
error.  Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .curve import CurveSpec, Marking, divisor_of_basis
from .degeneration import (DegenerationKind, InvalidCombination, Subcase,
                           degenerate_curve, expected_pullback_vf,
                           limit_structure_table, marking_fate, pullback_form)
from .knalgebra import (StructureTable, basis_form, basis_vf, expected_bracket,
                        expansion_of, lie_bracket, structure_table)
from .laurent import Laurent
from .paramfield import E, Specialization, rat
from .projline import TRat
from .verification import SUITES, run_suite

_CASES = {"two": Marking.TWO_POINT, "three-s": Marking.THREE_POINT}

_SUBCASES = {1: Subcase.N1, 2: Subcase.N2, 3: Subcase.N3, 4: Subcase.N4,
             5: Subcase.N5}


class UsageError(Exception):
    pass


def _parse_params(text: Optional[str], case: Marking) -> Optional[Specialization]:
    if not text:
        return None
    allowed = {"e1", "e2"} if case is Marking.TWO_POINT else {"e1", "e2", "a"}
    values = {}
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"bad parameter assignment {part!r}")
        key, _, raw = part.partition("=")
        key = key.strip()
        if key not in allowed:
            raise UsageError(f"unknown parameter {key!r} for this case")
        try:
            values[key] = rat(Fraction(raw.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad rational value {raw!r}: {exc}") from exc
    return Specialization(values)


def _build_curve(case: Marking, spec: Optional[Specialization]) -> CurveSpec:
    curve = CurveSpec.symbolic(case)
    if spec is not None:
        if case is Marking.THREE_POINT and "a" not in spec.assignments:
            raise UsageError("three-point numeric runs need a value for a")
        curve = curve.specialized(spec)
    return curve


def _emit(payload: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _table_payload(table: StructureTable, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(table.to_json_obj(), indent=2) + "\n"
    if fmt == "csv":
        lines = ["case,window,n,m,index,coeff"]
        for (n, m) in sorted(table.entries):
            for term in table.entries[(n, m)].to_json_obj():
                lines.append(f"{table.case},{table.window},{n},{m},"
                             f"{term['index']},\"{term['coeff']}\"")
        return "\n".join(lines) + "\n"
    lines = [f"case={table.case} window={table.window} "
             f"params={json.dumps(table.params)}"]
    for (n, m) in sorted(table.entries):
        lines.append(f"[{n},{m}] = {table.entries[(n, m)].render()}")
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    case = _CASES[args.case]
    curve = _build_curve(case, _parse_params(args.params, case))
    table = structure_table(curve, args.window)
    _emit(_table_payload(table, args.format), args.out)
    return 0


def cmd_bracket(args) -> int:
    case = _CASES[args.case]
    curve = _build_curve(case, _parse_params(args.params, case))
    engine = expansion_of(
        lie_bracket(basis_vf(curve, args.n), basis_vf(curve, args.m)).coeff)
    fixture = expected_bracket(curve, args.n, args.m)
    payload = {
        "case": args.case,
        "n": args.n,
        "m": args.m,
        "params": curve.params_dict(),
        "engine": engine.to_json_obj(),
        "fixture": fixture.to_json_obj(),
        "match": engine == fixture,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    result = run_suite(args.suite, args.window)
    _emit(json.dumps(result.to_json_obj(), indent=2) + "\n", args.out)
    if result.findings:
        for finding in result.findings:
            print(json.dumps(finding), file=sys.stderr)
        return 1
    return 0


def _resolve_subcase(args) -> Subcase:
    if args.kind == "cuspidal":
        if args.subcase is not None:
            raise UsageError("cuspidal degenerations take no --subcase")
        case = args.case or "two"
        return Subcase.CUSP_TWO if case == "two" else Subcase.CUSP_THREE
    if args.subcase is None:
        raise UsageError("nodal degenerations need --subcase 1..5")
    sub = _SUBCASES[args.subcase]
    implied = "two" if sub in (Subcase.N1, Subcase.N2) else "three-s"
    if args.case and args.case != implied:
        raise UsageError(f"subcase {args.subcase} belongs to case {implied}")
    return sub


def _kind_of(sub: Subcase) -> DegenerationKind:
    if sub in (Subcase.CUSP_TWO, Subcase.CUSP_THREE):
        return DegenerationKind.cuspidal()
    return DegenerationKind.nodal(E)


def cmd_degenerate(args) -> int:
    sub = _resolve_subcase(args)
    curve = degenerate_curve(sub)
    kind = _kind_of(sub)
    fate = marking_fate(curve, kind)
    table = limit_structure_table(curve, kind, args.window)
    payload = {
        "kind": args.kind,
        "subcase": sub.value,
        "marking_fate": fate.to_json_obj(),
        "table": table.to_json_obj(),
    }
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(_table_payload(table, args.format), args.out)
    return 0


def cmd_pullback(args) -> int:
    sub = _resolve_subcase(args)
    curve = degenerate_curve(sub)
    kind = _kind_of(sub)
    weight = args.weight
    form = pullback_form(basis_form(curve, args.n, weight), kind)
    fixture: Optional[TRat] = None
    if weight == -1:
        fixture = expected_pullback_vf(sub, args.n)
    elif weight == 1 and args.n == 0:
        if kind.kind == "nodal":
            fixture = TRat(Laurent.one(), Laurent({2: rat(1), 0: -3 * E}))
        else:
            fixture = TRat.monomial(-2)
    payload = {
        "kind": args.kind,
        "subcase": sub.value,
        "n": args.n,
        "lambda": weight,
        "result": form.render(),
        "coeff": form.coeff.render(),
        "fixture": fixture.render() if fixture is not None else None,
        "match": (form.coeff == fixture) if fixture is not None else None,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_divisor(args) -> int:
    case = _CASES[args.case]
    curve = CurveSpec.symbolic(case)
    div = divisor_of_basis(curve, args.n)
    payload = {
        "case": args.case,
        "n": args.n,
        "divisor": div.render(),
        "orders": div.to_json_obj(),
        "degree": div.degree(),
        "degree_zero": div.degree() == 0,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kncubic",
        description="Exact structure constants of vector-field algebras on "
                    "marked cubic curves, their degenerations, and the "
                    "identifications on the projective line.")
    subs = parser.add_subparsers(dest="verb", required=True)

    def add_common(p):
        p.add_argument("--out", metavar="PATH", default=None)

    p = subs.add_parser("table", help="structure-constant table")
    p.add_argument("--case", choices=sorted(_CASES), required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--params", default=None,
                   help="comma-separated assignments, e.g. e1=1,e2=2,a=7")
    p.add_argument("--format", choices=("json", "csv", "text"),
                   default="json")
    add_common(p)
    p.set_defaults(func=cmd_table)

    p = subs.add_parser("bracket", help="a single bracket with its fixture")
    p.add_argument("--case", choices=sorted(_CASES), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--params", default=None)
    add_common(p)
    p.set_defaults(func=cmd_bracket)

    p = subs.add_parser("verify", help="run an invariant suite")
    p.add_argument("--suite", required=True,
                   choices=sorted(SUITES) + ["all"])
    p.add_argument("--window", type=int, default=4)
    add_common(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("degenerate", help="limit table and marking fate")
    p.add_argument("--kind", choices=("nodal", "cuspidal"), required=True)
    p.add_argument("--case", choices=sorted(_CASES), default=None)
    p.add_argument("--subcase", type=int, choices=sorted(_SUBCASES),
                   default=None)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv", "text"),
                   default="json")
    add_common(p)
    p.set_defaults(func=cmd_degenerate)

    p = subs.add_parser("pullback", help="pull a basis section back to the line")
    p.add_argument("--kind", choices=("nodal", "cuspidal"), required=True)
    p.add_argument("--case", choices=sorted(_CASES), default=None)
    p.add_argument("--subcase", type=int, choices=sorted(_SUBCASES),
                   default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="weight", type=int, required=True)
    add_common(p)
    p.set_defaults(func=cmd_pullback)

    p = subs.add_parser("divisor", help="divisor of a basis function")
    p.add_argument("--case", choices=sorted(_CASES), required=True)
    p.add_argument("--n", type=int, required=True)
    add_common(p)
    p.set_defaults(func=cmd_divisor)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.verb in ("table", "degenerate") and args.window < 1:
            raise UsageError("window must be at least 1")
        return args.func(args)
    except (UsageError, InvalidCombination) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
