"""Degeneration of the marked cubic and pullback to the projective line.

When two branch values collide the cubic acquires a node (Y^2 =
4(X - e)^2(X + 2e)); when all three collide it acquires a cusp (Y^2 =
4X^3, keeping the overall factor 4 of the family).  The line maps

    nodal:    t -> (t^2 - 2e, 2t(t^2 - 3e)),
    cuspidal: t -> (t^2, 2t^3)

desingularize them, and vector fields and weighted forms pull back by
substituting these coordinates and converting the frame dz = dX/Y into
the dt frame.  Everything stays in exact rational arithmetic: the point
pairs over the node are never split into square roots, they are carried
as the quadratics t^2 - 3e and t^2 + 3e.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .curve import CurveSpec, Marking
from .knalgebra import (Expansion, StructureTable, VectorField, LambdaForm,
                        basis_vf, expected_bracket, structure_table)
from .laurent import Laurent
from .paramfield import (E, ZERO, ParamScalar, Specialization, rat,
                         specialize)
from .projline import P1Form, P1VectorField, TRat, bracket_p1, \
    denominator_base_power


class NotOnNodalCurve(ValueError):
    """The curve parameters are not a nodal specialization."""


class NotOnCuspidalCurve(ValueError):
    """The curve parameters are not the cuspidal specialization."""


class NonPolynomialResult(ValueError):
    """A pullback acquired poles away from the marked points."""


class InvalidCombination(ValueError):
    """The marking does not participate in any tabulated degeneration."""


@dataclass(frozen=True)
class DegenerationKind:
    kind: str  # "smooth" | "nodal" | "cuspidal"
    e: Optional[ParamScalar] = None

    @classmethod
    def smooth(cls) -> "DegenerationKind":
        return cls("smooth")

    @classmethod
    def nodal(cls, e: ParamScalar) -> "DegenerationKind":
        return cls("nodal", ParamScalar._of(e))

    @classmethod
    def cuspidal(cls) -> "DegenerationKind":
        return cls("cuspidal")


def classify(e1: ParamScalar, e2: ParamScalar,
             e3: Optional[ParamScalar] = None) -> DegenerationKind:
    """Smooth, nodal with repeated value e, or cuspidal, from the branch values."""
    e1, e2 = ParamScalar._of(e1), ParamScalar._of(e2)
    if e3 is None:
        e3 = -e1 - e2
    elif e1 + e2 + ParamScalar._of(e3) != ZERO:
        raise ValueError("branch values must sum to zero")
    if e1 == e2 == e3:
        return DegenerationKind.cuspidal()
    if e1 == e2 or e1 == e3:
        return DegenerationKind.nodal(e1)
    if e2 == e3:
        return DegenerationKind.nodal(e2)
    return DegenerationKind.smooth()


class Subcase(enum.Enum):
    N1 = "N1"
    N2 = "N2"
    N3 = "N3"
    N4 = "N4"
    N5 = "N5"
    CUSP_TWO = "CuspTwo"
    CUSP_THREE = "CuspThree"


def degenerate_curve(subcase: Subcase, e_value: ParamScalar = E) -> CurveSpec:
    """The canonical degenerate curve spec for a tabulated subcase.

    The repeated branch value stays symbolic (the symbol e by default) so
    the limit algebras remain one-parameter families.
    """
    e = ParamScalar._of(e_value)
    two, three = Marking.TWO_POINT, Marking.THREE_POINT
    if subcase is Subcase.N1:
        return CurveSpec(e, e, e, two)
    if subcase is Subcase.N2:
        return CurveSpec(-2 * e, e, -2 * e, two)
    if subcase is Subcase.N3:
        return CurveSpec(e, -2 * e, e, three)
    if subcase is Subcase.N4:
        return CurveSpec(e, e, e, three)
    if subcase is Subcase.N5:
        return CurveSpec(e, e, -5 * e, three)
    if subcase is Subcase.CUSP_TWO:
        return CurveSpec(ZERO, ZERO, ZERO, two)
    return CurveSpec(ZERO, ZERO, ZERO, three)


@dataclass(frozen=True)
class MarkingFate:
    """Where the markings end up on the line after desingularization."""

    subcase: Subcase
    p1_markings: Tuple[str, ...]
    count_before: int
    count_after: int
    singular_hit: bool

    def to_json_obj(self) -> dict:
        return {
            "subcase": self.subcase.value,
            "markings": list(self.p1_markings),
            "count_before": self.count_before,
            "count_after": self.count_after,
            "singular_hit": self.singular_hit,
        }


_FATES = {
    Subcase.N1: (("inf", "roots(t^2-3e)"), 2, 3, True),
    Subcase.N2: (("inf", "t=0"), 2, 2, False),
    Subcase.N3: (("inf", "roots(t^2-3e)"), 3, 3, True),
    Subcase.N4: (("inf", "roots(t^2-3e)"), 3, 3, True),
    Subcase.N5: (("inf", "roots(t^2+3e)"), 3, 3, False),
    Subcase.CUSP_TWO: (("inf", "t=0"), 2, 2, True),
    Subcase.CUSP_THREE: (("inf", "t=0"), 3, 2, True),
}


def _subcase_of(curve: CurveSpec, kind: DegenerationKind) -> Subcase:
    if kind.kind == "cuspidal":
        if classify(curve.e1, curve.e2).kind != "cuspidal":
            raise NotOnCuspidalCurve("branch values are not all zero")
        if not curve.a.is_zero():
            raise InvalidCombination("cuspidal marking limit requires a = 0")
        return (Subcase.CUSP_TWO if curve.case is Marking.TWO_POINT
                else Subcase.CUSP_THREE)
    if kind.kind != "nodal":
        raise InvalidCombination("no marking fate for a smooth member")
    actual = classify(curve.e1, curve.e2)
    if actual.kind != "nodal":
        raise NotOnNodalCurve("branch values do not define a node")
    e = actual.e
    if kind.e is not None and kind.e != e:
        raise NotOnNodalCurve("repeated branch value disagrees")
    if curve.case is Marking.TWO_POINT:
        return Subcase.N1 if curve.a == e else Subcase.N2
    if curve.a == e:
        return Subcase.N4 if curve.e1 == curve.e2 else Subcase.N3
    if curve.a == -5 * e and curve.e1 == curve.e2 == e:
        return Subcase.N5
    raise InvalidCombination(
        f"marking a = {curve.a} is not a tabulated nodal limit")


def marking_fate(curve: CurveSpec, kind: DegenerationKind) -> MarkingFate:
    """Implement the marking transition table of the degeneration cases."""
    sub = _subcase_of(curve, kind)
    markings, before, after, hit = _FATES[sub]
    return MarkingFate(sub, markings, before, after, hit)


# ---------------------------------------------------------------------------
# pullbacks
# ---------------------------------------------------------------------------

def _nodal_images(e: ParamScalar):
    x_t = Laurent({2: rat(1), 0: -2 * e})
    y_t = Laurent({3: rat(2), 1: -6 * e})
    frame = Laurent({2: rat(1), 0: -3 * e})
    return x_t, y_t, frame


def _cuspidal_images():
    x_t = Laurent({2: rat(1)})
    y_t = Laurent({3: rat(2)})
    return x_t, y_t, x_t


def _substitute(coeff_p: Laurent, coeff_q: Laurent, x_t: Laurent,
                y_t: Laurent, u_img: Laurent) -> TRat:
    """p(u) + Y q(u) with u = u_img(t), Y = y_t(t), as one fraction."""

    def parts(p: Laurent):
        if p.is_zero():
            return Laurent.zero(), 0
        k0 = min(0, p.valuation())
        num = Laurent.zero()
        for k, c in p.coeffs.items():
            num = num + (u_img ** (k - k0)).scale(c)
        return num, -k0

    np_, kp = parts(coeff_p)
    nq_, kq = parts(coeff_q)
    num = np_ * u_img ** kq + y_t * nq_ * u_img ** kp
    return TRat(num, u_img ** (kp + kq))


def _pullback(coeff_p: Laurent, coeff_q: Laurent, curve: CurveSpec,
              kind: DegenerationKind, weight: int) -> TRat:
    if kind.kind == "cuspidal":
        if classify(curve.e1, curve.e2).kind != "cuspidal":
            raise NotOnCuspidalCurve("branch values are not all zero")
        x_t, y_t, frame = _cuspidal_images()
    elif kind.kind == "nodal":
        actual = classify(curve.e1, curve.e2)
        if actual.kind != "nodal":
            raise NotOnNodalCurve("branch values do not define a node")
        if kind.e is not None and kind.e != actual.e:
            raise NotOnNodalCurve("repeated branch value disagrees")
        x_t, y_t, frame = _nodal_images(actual.e)
    else:
        raise ValueError("no pullback for a smooth member")
    u_img = x_t + Laurent.monomial(0, -curve.a)
    value = _substitute(coeff_p, coeff_q, x_t, y_t, u_img)
    if weight < 0:
        return value * TRat.of(frame) ** (-weight)
    if weight > 0:
        return value / TRat.of(frame) ** weight
    return value


_PAIR_QUADRATIC = {
    Subcase.N1: lambda e: Laurent({2: rat(1), 0: -3 * e}),
    Subcase.N3: lambda e: Laurent({2: rat(1), 0: -3 * e}),
    Subcase.N4: lambda e: Laurent({2: rat(1), 0: -3 * e}),
    Subcase.N5: lambda e: Laurent({2: rat(1), 0: 3 * e}),
}


def _check_vf_poles(value: TRat, curve: CurveSpec,
                    kind: DegenerationKind) -> TRat:
    """Poles of a pulled-back field may sit only at marked points."""
    if value.is_laurent():
        return value
    try:
        sub = _subcase_of(curve, kind)
    except InvalidCombination as exc:
        raise NonPolynomialResult(str(exc)) from exc
    base = _PAIR_QUADRATIC.get(sub)
    e = classify(curve.e1, curve.e2).e
    if base is None or denominator_base_power(value, base(e)) is None:
        raise NonPolynomialResult(
            f"denominator {value.den.render()} sits off the markings")
    return value


def pullback_nodal_vf(v: VectorField, e: ParamScalar) -> P1VectorField:
    """Pull a field back through the nodal line map; frame factor t^2 - 3e."""
    kind = DegenerationKind.nodal(e)
    value = _pullback(v.coeff.p, v.coeff.q, v.curve, kind, -1)
    return P1VectorField(_check_vf_poles(value, v.curve, kind))


def pullback_cuspidal_vf(v: VectorField) -> P1VectorField:
    """Pull a field back through the cuspidal line map; frame factor t^2."""
    kind = DegenerationKind.cuspidal()
    value = _pullback(v.coeff.p, v.coeff.q, v.curve, kind, -1)
    return P1VectorField(_check_vf_poles(value, v.curve, kind))


def pullback_vf(v: VectorField, kind: DegenerationKind) -> P1VectorField:
    if kind.kind == "cuspidal":
        return pullback_cuspidal_vf(v)
    if kind.kind == "nodal":
        e = kind.e if kind.e is not None else classify(v.curve.e1, v.curve.e2).e
        return pullback_nodal_vf(v, e)
    raise ValueError("no pullback for a smooth member")


def pullback_form(w: LambdaForm, kind: DegenerationKind) -> P1Form:
    """Pull a weighted form back; poles over the singularity are expected
    for positive weights and are kept in the stored denominator."""
    value = _pullback(w.coeff.p, w.coeff.q, w.curve, kind, w.weight)
    if w.weight == -1:
        value = _check_vf_poles(value, w.curve, kind)
    return P1Form(w.weight, value)


def expected_pullback_vf(subcase: Subcase, n: int,
                         e_value: ParamScalar = E) -> TRat:
    """Closed-form pullback fixtures, pair roots combined into quadratics."""
    e = ParamScalar._of(e_value)
    quad_m = TRat.of(Laurent({2: rat(1), 0: -3 * e}))
    quad_p = TRat.of(Laurent({2: rat(1), 0: 3 * e}))
    t = TRat.monomial(1)
    k = n // 2
    if subcase in (Subcase.CUSP_TWO, Subcase.CUSP_THREE):
        return TRat.monomial(n + 2)
    if subcase in (Subcase.N1, Subcase.N3, Subcase.N4):
        body = quad_m ** (k + 1)
        return body if n % 2 == 0 else t * body
    if subcase is Subcase.N2:
        if n % 2 == 0:
            return TRat.monomial(2 * k) * quad_m
        return TRat.monomial(2 * k - 1) * quad_m ** 2
    if n % 2 == 0:
        return quad_p ** k * quad_m
    return t * quad_p ** (k - 1) * quad_m ** 2


# ---------------------------------------------------------------------------
# limit tables
# ---------------------------------------------------------------------------

def limit_structure_table(curve: CurveSpec, kind: DegenerationKind,
                          window: int) -> StructureTable:
    """The symbolic table specialized at the degenerate parameter values."""
    sub = _subcase_of(curve, kind)
    symbolic = structure_table(CurveSpec.symbolic(curve.case), window)
    s = Specialization.of(e1=curve.e1, e2=curve.e2, a=curve.a)
    entries = {
        key: Expansion({n: specialize(c, s) for n, c in exp.terms.items()})
        for key, exp in symbolic.entries.items()
    }
    return StructureTable(f"{curve.case.value}:{sub.value}", window,
                          curve.params_dict(), entries)


def expected_limit_bracket(subcase: Subcase, n: int, m: int,
                           e_value: ParamScalar = E) -> Expansion:
    """Closed-form limit entry: the parametric fixture on the degenerate curve."""
    return expected_bracket(degenerate_curve(subcase, e_value), n, m)


@dataclass
class PullbackReport:
    subcase: str
    window: int
    violations: List[dict]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_obj(self) -> dict:
        return {"subcase": self.subcase, "window": self.window,
                "violations": self.violations}


def pullback_commutes_check(curve: CurveSpec, kind: DegenerationKind,
                            window: int) -> PullbackReport:
    """Bracket of pullbacks versus pullback of the limit bracket.

    Both sides are computed independently: the left side with the line
    bracket of the pulled-back fields, the right side by pushing the limit
    table entries through the pullback linearly.
    """
    sub = _subcase_of(curve, kind)
    table = limit_structure_table(curve, kind, window)
    pulled = {n: pullback_vf(basis_vf(curve, n), kind)
              for n in range(-window, window + 1)}
    needed = {idx for exp in table.entries.values() for idx in exp.indices()}
    images = dict(pulled)
    for idx in needed:
        if idx not in images:
            images[idx] = pullback_vf(basis_vf(curve, idx), kind)
    violations = []
    for (n, m), exp in table.entries.items():
        lhs = bracket_p1(pulled[n], pulled[m])
        rhs = P1VectorField(TRat.zero())
        for idx, c in exp.terms.items():
            rhs = rhs + images[idx].scale(c)
        if lhs.coeff != rhs.coeff:
            violations.append({"n": n, "m": m,
                               "lhs": lhs.coeff.render(),
                               "rhs": rhs.coeff.render()})
    return PullbackReport(sub.value, window, violations)
