"""Rational vector fields and weighted forms on the projective line.

Coefficients are rational functions of the affine coordinate t, held as a
Laurent-polynomial numerator over a monic polynomial denominator with
nonzero constant term (all powers of t live in the numerator).  That
canonical form makes equality structural and keeps the common case, a
plain Laurent polynomial, cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .laurent import Laurent, divexact, poly_gcd_1var, try_divexact
from .paramfield import ONE, DivisionByZero, ParamScalar


class TRat:
    """num/den with num Laurent and den a monic polynomial, den(0) != 0."""

    __slots__ = ("num", "den", "_hash", "_deriv")

    def __init__(self, num: Laurent, den: Laurent = None):
        self._hash = None
        self._deriv = None
        if den is None:
            den = Laurent.one()
        if den.is_zero():
            raise DivisionByZero("zero denominator on the line")
        if num.is_zero():
            self.num, self.den = Laurent.zero(), Laurent.one()
            return
        vd = den.valuation()
        den = den.shift(-vd)
        num = num.shift(-vd)
        if not den.is_one():
            vn = num.valuation()
            n0 = num.shift(-vn)
            g = poly_gcd_1var(n0, den)
            if g.degree() > 0:
                n0 = divexact(n0, g)
                den = divexact(den, g)
            lc = den.leading_coeff()
            if not lc.is_one():
                inv = ONE / lc
                den = den.scale(inv)
                n0 = n0.scale(inv)
            num = n0.shift(vn)
        self.num, self.den = num, den

    @classmethod
    def of(cls, x) -> "TRat":
        if isinstance(x, TRat):
            return x
        if isinstance(x, Laurent):
            return cls(x)
        return cls(Laurent.monomial(0, x))

    @classmethod
    def zero(cls) -> "TRat":
        return cls(Laurent.zero())

    @classmethod
    def monomial(cls, k: int, c=1) -> "TRat":
        return cls(Laurent.monomial(k, c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def as_laurent(self) -> Laurent:
        if not self.is_laurent():
            raise ValueError(f"{self.render()} has a nontrivial denominator")
        return self.num

    def __add__(self, other) -> "TRat":
        other = TRat.of(other)
        return TRat(self.num * other.den + other.num * self.den,
                    self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "TRat":
        return self + (-TRat.of(other))

    def __neg__(self) -> "TRat":
        out = TRat.__new__(TRat)
        out.num, out.den = -self.num, self.den
        out._hash = out._deriv = None
        return out

    def __mul__(self, other) -> "TRat":
        if isinstance(other, (int, ParamScalar)):
            return TRat(self.num.scale(other), self.den)
        other = TRat.of(other)
        return TRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TRat":
        other = TRat.of(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero function")
        return TRat(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int) -> "TRat":
        if k < 0:
            return (TRat.of(1) / self) ** (-k)
        out = TRat.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "TRat":
        if self._deriv is None:
            if self.den.is_one():
                self._deriv = TRat(self.num.derivative())
            else:
                # cancel the shared factor of den and den' up front so the
                # constructor's gcd works on the smallest possible degrees
                g = poly_gcd_1var(self.den, self.den.derivative())
                r = divexact(self.den, g)
                s = divexact(self.den.derivative(), g)
                self._deriv = TRat(self.num.derivative() * r - self.num * s,
                                   self.den * r)
        return self._deriv

    def evaluate(self, t0: ParamScalar) -> ParamScalar:
        den = self.den.evaluate(t0)
        if den.is_zero():
            raise DivisionByZero("evaluation at a pole")
        return self.num.evaluate(t0) / den

    def __eq__(self, other) -> bool:
        other = TRat.of(other) if isinstance(other, (Laurent, int)) else other
        return (isinstance(other, TRat)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def render(self, var: str = "t") -> str:
        if self.is_laurent():
            return self.num.render(var)
        return f"({self.num.render(var)})/({self.den.render(var)})"

    def __repr__(self) -> str:
        return f"TRat({self.render()})"


def denominator_base_power(x: TRat, base: Laurent):
    """If den is a power of the monic polynomial base, return the exponent."""
    den = x.den
    k = 0
    while not den.is_one():
        nxt = try_divexact(den, base)
        if nxt is None:
            return None
        den = nxt
        k += 1
    return k


@dataclass(frozen=True)
class P1VectorField:
    """coeff * d/dt, with a rational coefficient.

    The identities under test keep the coefficient a Laurent polynomial
    except where poles at marked points away from 0 and infinity are
    allowed (pair markings such as the roots of t^2 - 3e).
    """

    coeff: TRat

    @classmethod
    def of(cls, x) -> "P1VectorField":
        return cls(TRat.of(x))

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __add__(self, other: "P1VectorField") -> "P1VectorField":
        return P1VectorField(self.coeff + other.coeff)

    def __sub__(self, other: "P1VectorField") -> "P1VectorField":
        return P1VectorField(self.coeff - other.coeff)

    def __neg__(self) -> "P1VectorField":
        return P1VectorField(-self.coeff)

    def scale(self, c) -> "P1VectorField":
        return P1VectorField(self.coeff * c)

    def render(self) -> str:
        return f"{_wrap(self.coeff)} d/dt"


def _wrap(coeff: TRat) -> str:
    text = coeff.render()
    if " " in text and not coeff.is_laurent():
        return text  # already a (num)/(den) pair
    return f"({text})" if " " in text else text


@dataclass(frozen=True)
class P1Form:
    """coeff * (dt)^weight."""

    weight: int
    coeff: TRat

    def render(self) -> str:
        if self.weight == 0:
            return self.coeff.render()
        dt = "dt" if self.weight == 1 else f"(dt)^{self.weight}"
        if self.weight == -1:
            dt = "d/dt"
        return f"{_wrap(self.coeff)} {dt}"


def bracket_p1(v: P1VectorField, w: P1VectorField) -> P1VectorField:
    """[f d/dt, g d/dt] = (f g' - g f') d/dt."""
    f, g = v.coeff, w.coeff
    return P1VectorField(f * g.derivative() - g * f.derivative())
