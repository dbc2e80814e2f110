"""Verification suites: every identity the engine is expected to satisfy.

Each suite returns a SuiteResult with one record per check and a flat list
of findings; a finding carries the location and both sides of the failed
comparison.  The suites are pure recomputation, no state, so they can run
from the command line and from the test suite alike.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Dict, List

from .curve import (CurveSpec, Divisor, INFINITY, MARKED_MINUS, MARKED_PLUS,
                    Marking, divisor_of_basis, torsion)
from .degeneration import (DegenerationKind, Subcase, classify,
                           degenerate_curve, expected_limit_bracket,
                           expected_pullback_vf, limit_structure_table,
                           marking_fate, pullback_commutes_check,
                           pullback_form, pullback_vf)
from .knalgebra import (Expansion, StructureTable, almost_grading_check,
                        basis_form, basis_vf, expected_bracket,
                        jacobi_residual, numeric_table_check, structure_table)
from .laurent import Laurent
from .p1algebras import (ClosureFailure, case5_bracket, case5_closure,
                         grading_respect_witness, phi_apply, phi_case5,
                         phi_cuspidal, phi_nodal_full, phi_w,
                         verify_homomorphism, z_divisor_check,
                         z_structure_check)
from .paramfield import E, rat
from .projline import TRat, bracket_p1

DEGENERATIONS = {
    Subcase.N1: DegenerationKind.nodal(E),
    Subcase.N2: DegenerationKind.nodal(E),
    Subcase.N3: DegenerationKind.nodal(E),
    Subcase.N4: DegenerationKind.nodal(E),
    Subcase.N5: DegenerationKind.nodal(E),
    Subcase.CUSP_TWO: DegenerationKind.cuspidal(),
    Subcase.CUSP_THREE: DegenerationKind.cuspidal(),
}


@dataclass
class SuiteResult:
    suite: str
    window: int
    checks: List[dict] = field(default_factory=list)
    findings: List[dict] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "pass" if not self.findings else "fail"

    def record(self, name: str, failures: List[dict]):
        self.checks.append({"name": name,
                            "status": "pass" if not failures else "fail",
                            "failures": len(failures)})
        self.findings.extend({"check": name, **f} for f in failures)

    def to_json_obj(self) -> dict:
        return {"suite": self.suite, "window": self.window,
                "status": self.status, "checks": self.checks,
                "findings": self.findings}


def _table_vs_fixture(table: StructureTable, curve: CurveSpec) -> List[dict]:
    bad = []
    for (n, m), exp in table.entries.items():
        want = expected_bracket(curve, n, m)
        if exp != want:
            bad.append({"location": f"({n},{m})", "engine": exp.render(),
                        "fixture": want.render()})
    return bad


def suite_prop4(window: int = 5) -> SuiteResult:
    """Structure equations against the closed-form tables, plus oracles."""
    result = SuiteResult("prop4", window)
    for case in (Marking.TWO_POINT, Marking.THREE_POINT):
        curve = CurveSpec.symbolic(case)
        table = structure_table(curve, window)
        result.record(f"{case.value}:fixture", _table_vs_fixture(table, curve))
        result.record(f"{case.value}:antisymmetry",
                      [{"location": str(pair)}
                       for pair in table.antisymmetry_violations()])
        result.record(f"{case.value}:numeric-oracle",
                      numeric_table_check(curve, table, trials=10))
    return result


def suite_jacobi(window: int = 3) -> SuiteResult:
    """Jacobi identity over sorted index triples, both marking cases.

    The engine bracket is antisymmetric by construction, which makes the
    cyclic residual alternating, so sorted triples cover all of them.
    """
    result = SuiteResult("jacobi", window)
    for case in (Marking.TWO_POINT, Marking.THREE_POINT):
        curve = CurveSpec.symbolic(case)
        bad = []
        for n, m, p in combinations_with_replacement(
                range(-window, window + 1), 3):
            if not jacobi_residual(curve, n, m, p).is_zero():
                bad.append({"location": f"({n},{m},{p})"})
        result.record(f"{case.value}:jacobi", bad)
    return result


def suite_grading(window: int = 5) -> SuiteResult:
    result = SuiteResult("grading", window)
    for case in (Marking.TWO_POINT, Marking.THREE_POINT):
        curve = CurveSpec.symbolic(case)
        report = almost_grading_check(structure_table(curve, window), case)
        result.record(f"{case.value}:almost-grading", report.violations)
    return result


def _expected_divisor(curve: CurveSpec, n: int) -> Divisor:
    k = n // 2
    if curve.case is Marking.TWO_POINT:
        if n % 2 == 0:
            return Divisor({INFINITY: -2 * k, torsion(1): 2 * k})
        return Divisor({INFINITY: -(2 * k + 1), torsion(1): 2 * k - 1,
                        torsion(2): 1, torsion(3): 1})
    if n % 2 == 0:
        return Divisor({INFINITY: -2 * k, MARKED_PLUS: k, MARKED_MINUS: k})
    return Divisor({INFINITY: -(2 * k + 1), MARKED_PLUS: k - 1,
                    MARKED_MINUS: k - 1, torsion(1): 1, torsion(2): 1,
                    torsion(3): 1})


def suite_prop2(index_range: int = 6) -> SuiteResult:
    """Divisors of the basis functions, and their vanishing total degree."""
    result = SuiteResult("prop2", index_range)
    for case in (Marking.TWO_POINT, Marking.THREE_POINT):
        curve = CurveSpec.symbolic(case)
        bad = []
        for n in range(-index_range, index_range + 1):
            div = divisor_of_basis(curve, n)
            want = _expected_divisor(curve, n)
            if div != want:
                bad.append({"location": f"n={n}", "engine": div.render(),
                            "fixture": want.render()})
            if div.degree() != 0:
                bad.append({"location": f"n={n}", "engine":
                            f"degree {div.degree()}", "fixture": "degree 0"})
        result.record(f"{case.value}:divisors", bad)
    return result


def line_map_residual(curve: CurveSpec, kind: DegenerationKind) -> Laurent:
    """Y(t)^2 - 4 prod (X(t) - e_i); identically zero when the map lands
    on the degenerate curve."""
    if kind.kind == "cuspidal":
        x_t = Laurent({2: rat(1)})
        y_t = Laurent({3: rat(2)})
    else:
        e = classify(curve.e1, curve.e2).e
        x_t = Laurent({2: rat(1), 0: -2 * e})
        y_t = Laurent({3: rat(2), 1: -6 * e})
    prod = Laurent.monomial(0, 4)
    for ei in (curve.e1, curve.e2, curve.e3):
        prod = prod * (x_t + Laurent.monomial(0, -ei))
    return y_t * y_t - prod


def suite_degeneration(window: int = 4, pullback_range: int = 6) -> SuiteResult:
    result = SuiteResult("degeneration", window)
    transitions = set()
    for sub in Subcase:
        kind = DEGENERATIONS[sub]
        curve = degenerate_curve(sub)
        name = sub.value

        residual = line_map_residual(curve, kind)
        result.record(f"{name}:curve-equation",
                      [] if residual.is_zero() else
                      [{"location": name, "engine": residual.render("t")}])

        fate = marking_fate(curve, kind)
        transitions.add((fate.count_before, fate.count_after))

        bad = []
        for n in range(-pullback_range, pullback_range + 1):
            got = pullback_vf(basis_vf(curve, n), kind).coeff
            want = expected_pullback_vf(sub, n)
            if got != want:
                bad.append({"location": f"n={n}", "engine": got.render(),
                            "fixture": want.render()})
        result.record(f"{name}:pullback-fixtures", bad)

        table = limit_structure_table(curve, kind, window)
        bad = []
        for (n, m), exp in table.entries.items():
            want = expected_limit_bracket(sub, n, m)
            if exp != want:
                bad.append({"location": f"({n},{m})", "engine": exp.render(),
                            "fixture": want.render()})
        direct = structure_table(curve, window)
        for (n, m), exp in table.entries.items():
            if exp != direct.entries[(n, m)]:
                bad.append({"location": f"({n},{m})",
                            "engine": direct.entries[(n, m)].render(),
                            "fixture": exp.render()})
        result.record(f"{name}:limit-table", bad)

        commutes = pullback_commutes_check(curve, kind, window)
        result.record(f"{name}:pullback-commutes", commutes.violations)

        # constant differential: simple poles over a node, double over a cusp
        dz = pullback_form(basis_form(curve, 0, 1), kind)
        bad = []
        if kind.kind == "nodal":
            want = TRat(Laurent.one(), Laurent({2: rat(1), 0: -3 * E}))
            if dz.coeff != want:
                bad.append({"location": name, "engine": dz.coeff.render(),
                            "fixture": want.render()})
        else:
            if dz.coeff != TRat.monomial(-2):
                bad.append({"location": name, "engine": dz.coeff.render(),
                            "fixture": "t^-2"})
        result.record(f"{name}:constant-differential", bad)

    missing = {(2, 2), (2, 3), (3, 2), (3, 3)} - transitions
    result.record("marking-transitions",
                  [{"location": str(t)} for t in sorted(missing)])
    return result


def suite_phi(window: int = 4, witness_range: int = 8) -> SuiteResult:
    """Identification maps: homomorphism property and grading witnesses."""
    result = SuiteResult("phi", window)
    alpha2 = 3 * E
    plans = [
        (phi_cuspidal(), [Subcase.CUSP_TWO, Subcase.CUSP_THREE]),
        (phi_nodal_full(alpha2), [Subcase.N1, Subcase.N3, Subcase.N4]),
        (phi_w(alpha2), [Subcase.N2]),
        (phi_case5(E), [Subcase.N5]),
    ]
    for phi, subs in plans:
        for sub in subs:
            curve = degenerate_curve(sub)
            table = limit_structure_table(curve, DEGENERATIONS[sub], window)
            report = verify_homomorphism(phi, table, window)
            result.record(f"phi:{phi.label()}:{sub.value}", report.violations)
        witness = grading_respect_witness(phi, witness_range)
        ok = witness.a == 1 and witness.k <= 3 and witness.l <= 3
        result.record(f"witness:{phi.label()}",
                      [] if ok else [{"location": phi.label(),
                                      "engine": str(witness.to_json_obj())}])
    return result


def suite_zalgebra(window: int = 6) -> SuiteResult:
    """Structure and divisors of the pair algebra, symbolically."""
    result = SuiteResult("zalgebra", window)
    report = z_structure_check(E, window)
    result.record("pair-structure", report.violations)
    bad = []
    for kind in ("H", "G"):
        for n in range(1, window + 1):
            data = z_divisor_check(E, kind, n)
            want_pair = n - 1
            want_inf = -2 * n + 4 if kind == "H" else -2 * n + 3
            want_zero = 0 if kind == "H" else 1
            got = data["orders"]
            if (data["degree"] != 2 or got["roots(t^2-alpha^2)"] != want_pair
                    or got["inf"] != want_inf or got["t=0"] != want_zero):
                bad.append({"location": f"{kind}_{n}", "engine": str(data)})
    result.record("pair-divisors", bad)
    return result


def suite_case5(window: int = 4, jacobi_range: int = 3,
                seed: int = 20240301) -> SuiteResult:
    """Closure of the omitted subalgebra table, plus its own oracles."""
    result = SuiteResult("case5", window)
    try:
        table = case5_closure(E, window)
        result.record("closure", [])
    except ClosureFailure as exc:  # would falsify the subalgebra claim
        result.record("closure", [{"location": "closure", "engine": str(exc)}])
        return result
    result.record("antisymmetry",
                  [{"location": str(p)}
                   for p in table.antisymmetry_violations()])

    bad = []
    for n, m, p in combinations_with_replacement(
            range(-jacobi_range, jacobi_range + 1), 3):
        jac = Expansion()
        for a, b, c in ((n, m, p), (m, p, n), (p, n, m)):
            inner = case5_bracket(E, a, b)
            for idx, coeff in inner.terms.items():
                jac = jac + case5_bracket(E, idx, c).scale(coeff)
        if not jac.is_zero():
            bad.append({"location": f"({n},{m},{p})", "engine": jac.render()})
    result.record("table-jacobi", bad)

    # numeric oracle at e = -3 (the pair quadratic t^2 - 9 splits)
    rng = random.Random(seed)
    e_val = rat(-3)
    phi = phi_case5(e_val)
    bad = []
    for _ in range(10):
        t0 = rat(rng.choice([v for v in range(-9, 10)
                             if v not in (-3, 0, 3)]))
        n = rng.randint(-window, window)
        m = rng.randint(-window, window)
        lhs = bracket_p1(phi_apply(phi, n), phi_apply(phi, m)).coeff
        rhs = TRat.zero()
        for idx, c in case5_bracket(e_val, n, m).terms.items():
            rhs = rhs + phi_apply(phi, idx).coeff * c
        if lhs.evaluate(t0) != rhs.evaluate(t0):
            bad.append({"location": f"({n},{m}) at t={t0}"})
    result.record("numeric-oracle", bad)
    return result


SUITES: Dict[str, Callable[[int], SuiteResult]] = {
    "prop4": lambda w: suite_prop4(w),
    "jacobi": lambda w: suite_jacobi(min(w, 3)),
    "grading": lambda w: suite_grading(w),
    "prop2": lambda w: suite_prop2(max(w, 6)),
    "degeneration": lambda w: suite_degeneration(w),
    "phi": lambda w: suite_phi(w),
    "zalgebra": lambda w: suite_zalgebra(max(w, 6)),
    "case5": lambda w: suite_case5(w),
}


def run_suite(name: str, window: int = 4) -> SuiteResult:
    if name == "all":
        total = SuiteResult("all", window)
        for key in SUITES:
            sub = SUITES[key](window)
            for check in sub.checks:
                total.checks.append({**check, "name": f"{key}:{check['name']}"})
            total.findings.extend(sub.findings)
        return total
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](window)
