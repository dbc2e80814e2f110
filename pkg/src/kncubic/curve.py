"""The coordinate ring of a marked cubic curve in Laurent normal form.

The curve is Y^2 = f(X) with f(X) = 4(X - e1)(X - e2)(X - e3) and
e1 + e2 + e3 = 0.  Working in the shifted variable u = X - a (a is the
affine coordinate of the extra marking; a = e1 in the two-marking case),
every element of the coordinate ring localized at the markings has the
unique normal form p(u) + Y*q(u) with Laurent polynomials p, q.  The
graded basis, the derivation d/dz = Y d/dX, orders at the named points
and divisors of basis elements all live here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .laurent import Laurent
from .paramfield import (A, E1, E2, HALF, ONE, ZERO, ParamScalar,
                         Specialization, specialize)


class CurveMismatch(ValueError):
    """Operands live on different curves."""


class NotMonomialForm(ValueError):
    """Order computation needs a recognizable monomial u^k * Y^m."""


class Marking(enum.Enum):
    TWO_POINT = "two"
    THREE_POINT = "three-s"


@dataclass(frozen=True)
class CurveSpec:
    """Curve parameters plus the marking choice.

    In the two-point case the extra marking sits at the branch point
    (e1, 0), so a = e1 and b^2 = 0; in the three-point case the markings
    are (a, b) and (a, -b) with b^2 = 4(a - e1)(a - e2)(a - e3).  Only
    b^2 is ever stored or used.
    """

    e1: ParamScalar
    e2: ParamScalar
    a: ParamScalar
    case: Marking

    def __post_init__(self):
        if self.case is Marking.TWO_POINT and self.a != self.e1:
            raise ValueError("two-point marking requires a = e1")

    @property
    def e3(self) -> ParamScalar:
        return -self.e1 - self.e2

    @property
    def b_squared(self) -> ParamScalar:
        return 4 * (self.a - self.e1) * (self.a - self.e2) * (self.a - self.e3)

    @classmethod
    def symbolic(cls, case: Marking) -> "CurveSpec":
        a = E1 if case is Marking.TWO_POINT else A
        return cls(E1, E2, a, case)

    @classmethod
    def with_params(cls, case: Marking, e1, e2, a=None) -> "CurveSpec":
        e1 = ParamScalar._of(e1)
        e2 = ParamScalar._of(e2)
        if case is Marking.TWO_POINT:
            if a is not None and ParamScalar._of(a) != e1:
                raise ValueError("two-point marking requires a = e1")
            a = e1
        elif a is None:
            raise ValueError("three-point marking needs a value for a")
        return cls(e1, e2, ParamScalar._of(a), case)

    def specialized(self, s: Specialization) -> "CurveSpec":
        return CurveSpec(specialize(self.e1, s), specialize(self.e2, s),
                         specialize(self.a, s), self.case)

    def params_dict(self) -> dict:
        return {"e1": str(self.e1), "e2": str(self.e2), "a": str(self.a)}


@lru_cache(maxsize=None)
def f_poly(curve: CurveSpec) -> Laurent:
    """The cubic f expanded in u = X - a: 4*(u + a - e1)(u + a - e2)(u + a - e3).

    Degree 3 with leading coefficient 4; the constant term is f(a) = b^2.
    """
    prod = Laurent.monomial(0, 4)
    for ei in (curve.e1, curve.e2, curve.e3):
        prod = prod * Laurent({1: ONE, 0: curve.a - ei})
    return prod


class CurveFunction:
    """Normal form p(u) + Y*q(u) of a function on the curve."""

    __slots__ = ("p", "q", "curve")

    def __init__(self, p: Laurent, q: Laurent, curve: CurveSpec):
        self.p = p
        self.q = q
        self.curve = curve

    @classmethod
    def zero(cls, curve: CurveSpec) -> "CurveFunction":
        return cls(Laurent.zero(), Laurent.zero(), curve)

    @classmethod
    def const(cls, c, curve: CurveSpec) -> "CurveFunction":
        return cls(Laurent.monomial(0, c), Laurent.zero(), curve)

    @classmethod
    def y(cls, curve: CurveSpec) -> "CurveFunction":
        return cls(Laurent.zero(), Laurent.one(), curve)

    def _check(self, other: "CurveFunction"):
        if self.curve != other.curve:
            raise CurveMismatch("operands on different curves")

    def is_zero(self) -> bool:
        return self.p.is_zero() and self.q.is_zero()

    def __add__(self, other: "CurveFunction") -> "CurveFunction":
        self._check(other)
        return CurveFunction(self.p + other.p, self.q + other.q, self.curve)

    def __sub__(self, other: "CurveFunction") -> "CurveFunction":
        self._check(other)
        return CurveFunction(self.p - other.p, self.q - other.q, self.curve)

    def __neg__(self) -> "CurveFunction":
        return CurveFunction(-self.p, -self.q, self.curve)

    def __mul__(self, other) -> "CurveFunction":
        if isinstance(other, (int, ParamScalar)):
            return self.scale(other)
        self._check(other)
        f = f_poly(self.curve)
        p = self.p * other.p + f * (self.q * other.q)
        q = self.p * other.q + other.p * self.q
        return CurveFunction(p, q, self.curve)

    __rmul__ = __mul__

    def scale(self, c) -> "CurveFunction":
        return CurveFunction(self.p.scale(c), self.q.scale(c), self.curve)

    def derive_dz(self) -> "CurveFunction":
        """Apply d/dz = Y d/dX, staying in normal form.

        d/dX(p + Y q) = p' + (dY/dX) q + Y q' and Y dY/dX = f'/2, so
        Y d/dX(p + Y q) = (f q' + f'/2 q) + Y p'.
        """
        f = f_poly(self.curve)
        fprime = f.derivative()
        p = f * self.q.derivative() + fprime.scale(HALF) * self.q
        return CurveFunction(p, self.p.derivative(), self.curve)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CurveFunction) and self.curve == other.curve
                and self.p == other.p and self.q == other.q)

    def __hash__(self):
        return hash((self.p, self.q, self.curve))

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if not self.p.is_zero():
            parts.append(self.p.render("u"))
        if not self.q.is_zero():
            parts.append(f"Y*({self.q.render('u')})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CurveFunction({self.render()})"


def cf_arith(op: str, x: CurveFunction, y: CurveFunction) -> CurveFunction:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")


def derive_dz(x: CurveFunction) -> CurveFunction:
    return x.derive_dz()


# ---------------------------------------------------------------------------
# the graded function basis
# ---------------------------------------------------------------------------

def basis_function(curve: CurveSpec, n: int) -> CurveFunction:
    """Basis element with index n: u^k for n = 2k, (1/2) Y u^(k-1) for n = 2k+1."""
    if n % 2 == 0:
        return CurveFunction(Laurent.monomial(n // 2), Laurent.zero(), curve)
    k = (n - 1) // 2
    return CurveFunction(Laurent.zero(), Laurent.monomial(k - 1, HALF), curve)


def expand_in_basis(x: CurveFunction) -> dict:
    """Coefficients of x over the graded basis, as a map index -> scalar.

    Exponent k of u in the plain part gives index 2k; exponent j of u in
    the Y part gives index 2j + 3 with the coefficient doubled (inverting
    the 1/2 in the odd basis elements).  Inverse of basis_function.
    """
    out = {}
    for k, c in x.p.coeffs.items():
        out[2 * k] = c
    for j, c in x.q.coeffs.items():
        out[2 * j + 3] = 2 * c
    return out


def from_expansion(curve: CurveSpec, terms: dict) -> CurveFunction:
    """Rebuild a function from its basis expansion."""
    total = CurveFunction.zero(curve)
    for n, c in terms.items():
        total = total + basis_function(curve, n).scale(c)
    return total


# ---------------------------------------------------------------------------
# points, orders, divisors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointId:
    """A named point of the curve.

    kind is one of "inf", "torsion" (the branch points (e_i, 0)),
    "marked" (the pair over X = a) or "generic" (an explicit pair over
    X = gamma); marked/generic carry a sign label only, never a value
    of the square root.
    """

    kind: str
    index: int = 0
    plus: bool = True
    gamma: Optional[ParamScalar] = None

    def label(self) -> str:
        if self.kind == "inf":
            return "inf"
        if self.kind == "torsion":
            return f"E{self.index}"
        if self.kind == "marked":
            return "P+" if self.plus else "P-"
        return f"({self.gamma};{'+' if self.plus else '-'})"

    def _sort_key(self):
        order = {"inf": 0, "torsion": 1, "marked": 2, "generic": 3}
        return (order[self.kind], self.index, not self.plus, str(self.gamma))


INFINITY = PointId("inf")
MARKED_PLUS = PointId("marked", plus=True)
MARKED_MINUS = PointId("marked", plus=False)


def torsion(i: int) -> PointId:
    if i not in (1, 2, 3):
        raise ValueError("torsion index must be 1, 2 or 3")
    return PointId("torsion", index=i)


def generic(gamma: ParamScalar, plus: bool = True) -> PointId:
    return PointId("generic", plus=plus, gamma=ParamScalar._of(gamma))


class Divisor:
    """Finite formal sum of points with integer multiplicities."""

    def __init__(self, orders: dict):
        self.orders = {pt: k for pt, k in orders.items() if k}

    def degree(self) -> int:
        return sum(self.orders.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self.orders == other.orders

    def render(self) -> str:
        if not self.orders:
            return "0"
        parts = []
        for pt in sorted(self.orders, key=PointId._sort_key):
            k = self.orders[pt]
            term = f"{abs(k)}*[{pt.label()}]"
            if not parts:
                parts.append(term if k > 0 else "-" + term)
            else:
                parts.append(("+ " if k > 0 else "- ") + term)
        return " ".join(parts)

    def to_json_obj(self) -> dict:
        return {pt.label(): k
                for pt in sorted(self.orders, key=PointId._sort_key)
                for k in (self.orders[pt],)}

    def __repr__(self) -> str:
        return f"Divisor({self.render()})"


def _monomial_shape(x: CurveFunction):
    """Recognize x as c * u^k * Y^m with m in {0, 1}; else raise."""
    if x.q.is_zero() and x.p.is_monomial():
        (k, c), = x.p.coeffs.items()
        return k, 0, c
    if x.p.is_zero() and x.q.is_monomial():
        (k, c), = x.q.coeffs.items()
        return k, 1, c
    raise NotMonomialForm(f"not of monomial form: {x.render()}")


def order_at(x: CurveFunction, pt: PointId) -> int:
    """Vanishing order of a monomial-form function at a named point.

    Uses the standard order table on the smooth cubic: X - gamma has
    order -2 at infinity, 2 at a branch point with matching coordinate,
    1 at each of the two points over any other affine gamma; Y has order
    -3 at infinity, 1 at each branch point, 0 elsewhere.
    """
    k, m, _ = _monomial_shape(x)
    curve = x.curve
    if pt.kind == "inf":
        return -2 * k - 3 * m
    if pt.kind == "torsion":
        ei = (curve.e1, curve.e2, curve.e3)[pt.index - 1]
        u_ord = 2 if curve.a == ei else 0
        return u_ord * k + m
    if pt.kind == "marked":
        if curve.case is Marking.TWO_POINT:
            # (a, +-b) with b = 0 is the branch point (e1, 0)
            return order_at(x, torsion(1))
        return k
    # generic point over X = gamma
    if pt.gamma == curve.a:
        return order_at(x, MARKED_PLUS if pt.plus else MARKED_MINUS)
    for i, ei in enumerate((curve.e1, curve.e2, curve.e3), start=1):
        if pt.gamma == ei:
            return order_at(x, torsion(i))
    return 0


def divisor_of_basis(curve: CurveSpec, n: int) -> Divisor:
    """Divisor of the n-th basis function over the named points."""
    points = [INFINITY, torsion(1), torsion(2), torsion(3)]
    if curve.case is Marking.THREE_POINT:
        points += [MARKED_PLUS, MARKED_MINUS]
    x = basis_function(curve, n)
    return Divisor({pt: order_at(x, pt) for pt in points})


# ---------------------------------------------------------------------------
# marking diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarkingReport:
    b_squared_consistent: bool
    four_torsion_residual: ParamScalar

    @property
    def valid(self) -> bool:
        return self.b_squared_consistent

    @property
    def is_four_torsion(self) -> bool:
        return self.four_torsion_residual.is_zero()


def validate_marking(curve: CurveSpec) -> MarkingReport:
    """Check b^2 = f(a) and report the sign-free 4-torsion residual.

    The residual (a - e3)^2 - (e3 - e1)(e3 - e2) vanishes exactly when a
    is one of the two marking coordinates produced by halving the branch
    point (e3, 0); it is advisory, no construction enforces it.
    """
    f_at_a = f_poly(curve).evaluate(ZERO)  # constant term, i.e. f(a)
    residual = (curve.a - curve.e3) ** 2 - (curve.e3 - curve.e1) * (curve.e3 - curve.e2)
    return MarkingReport(f_at_a == curve.b_squared, residual)
