"""Laurent polynomials in one variable over the parameter field."""

from __future__ import annotations

from typing import Mapping, Union

from .paramfield import ONE, ZERO, DivisionByZero, ExactDivisionError, ParamScalar

Scalar = Union[ParamScalar, int]


class Laurent:
    """Sparse Laurent polynomial with ParamScalar coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Union[Mapping, None] = None):
        clean: dict = {}
        if coeffs:
            for k, c in coeffs.items():
                c = ParamScalar._of(c)
                if not c.is_zero():
                    clean[k] = c
        self.coeffs = clean
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: dict) -> "Laurent":
        p = cls.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def zero(cls) -> "Laurent":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Laurent":
        return cls._raw({0: ONE})

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "Laurent":
        c = ParamScalar._of(c)
        return cls._raw({k: c} if not c.is_zero() else {})

    # -- structure ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == {0: ONE}

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def valuation(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no valuation")
        return min(self.coeffs)

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return max(self.coeffs)

    def is_polynomial(self) -> bool:
        return not self.coeffs or min(self.coeffs) >= 0

    def leading_coeff(self) -> ParamScalar:
        return self.coeffs[self.degree()]

    def __getitem__(self, k: int) -> ParamScalar:
        return self.coeffs.get(k, ZERO)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Laurent") -> "Laurent":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(k, None)
            else:
                out[k] = v
        return Laurent._raw(out)

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __neg__(self) -> "Laurent":
        return Laurent._raw({k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, (int, ParamScalar)):
            return self.scale(other)
        out: dict = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                v = out.get(k)
                v = c1 * c2 if v is None else v + c1 * c2
                if v.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = v
        return Laurent._raw(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Laurent":
        c = ParamScalar._of(c)
        if c.is_zero():
            return Laurent.zero()
        return Laurent._raw({k: v * c for k, v in self.coeffs.items()})

    def shift(self, j: int) -> "Laurent":
        """Multiply by the j-th power of the variable."""
        if j == 0:
            return self
        return Laurent._raw({k + j: c for k, c in self.coeffs.items()})

    def __pow__(self, k: int) -> "Laurent":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (e, c), = self.coeffs.items()
            return Laurent._raw({e * k: c ** k})
        acc = Laurent.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def derivative(self) -> "Laurent":
        out = {}
        for k, c in self.coeffs.items():
            if k:
                out[k - 1] = c * k
        return Laurent._raw(out)

    def evaluate(self, x: ParamScalar) -> ParamScalar:
        """Exact evaluation; x must be nonzero if negative powers occur."""
        total = ZERO
        for k, c in self.coeffs.items():
            if k < 0 and x.is_zero():
                raise DivisionByZero("evaluating a pole at zero")
            total = total + c * x ** k
        return total

    def substitute(self, img: "Laurent") -> "Laurent":
        """Composition self(img); requires self to have no negative powers."""
        if not self.is_polynomial():
            raise ValueError("substitute requires a plain polynomial")
        if self.is_zero():
            return Laurent.zero()
        acc = Laurent.zero()
        for k in range(self.degree(), -1, -1):
            acc = acc * img
            c = self.coeffs.get(k)
            if c is not None:
                acc = acc + Laurent.monomial(0, c)
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, Laurent) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.coeffs.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def render(self, var: str = "u") -> str:
        """Deterministic text form, highest power first."""
        if not self.coeffs:
            return "0"
        out = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            cs = str(c)
            neg = cs.startswith("-") and "+" not in cs and " - " not in cs
            mag = cs[1:] if neg else cs
            if "/" in mag or " " in mag:
                mag, neg = f"({cs})", False
            if k == 0:
                body = mag
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if mag == "1" else f"{mag}*{power}"
            if not out:
                out.append("-" + body if neg else body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def __repr__(self) -> str:
        return f"Laurent({self.render()})"


def divexact(f: Laurent, g: Laurent) -> Laurent:
    """Exact division of Laurent polynomials; ExactDivisionError otherwise."""
    if g.is_zero():
        raise DivisionByZero("Laurent division by zero")
    if f.is_zero():
        return Laurent.zero()
    gv = g.valuation()
    gp = g.shift(-gv)
    fv = f.valuation()
    rem = dict(f.shift(-fv).coeffs)
    quo: dict = {}
    gd = gp.degree()
    glc = gp.leading_coeff()
    while rem:
        d = max(rem)
        if d < gd:
            raise ExactDivisionError("Laurent division is not exact")
        qc = rem.pop(d) / glc
        quo[d - gd] = qc
        for k, c in gp.coeffs.items():
            if k == gd:
                continue
            e = k + d - gd
            v = rem.get(e, ZERO) - qc * c
            if v.is_zero():
                rem.pop(e, None)
            else:
                rem[e] = v
    return Laurent._raw(quo).shift(fv - gv)


def try_divexact(f: Laurent, g: Laurent):
    """divexact, returning None instead of raising when not exact."""
    try:
        return divexact(f, g)
    except ExactDivisionError:
        return None


def poly_gcd_1var(f: Laurent, g: Laurent) -> Laurent:
    """Monic gcd of two univariate polynomials over the parameter field.

    Inputs must have no negative powers; plain Euclid, with a monic
    normalization each round to keep coefficients reduced.
    """
    if not (f.is_polynomial() and g.is_polynomial()):
        raise ValueError("gcd requires plain polynomials")
    while not g.is_zero():
        g = g.scale(ONE / g.leading_coeff())
        # f mod g
        rem = dict(f.coeffs)
        gd = g.degree()
        while rem and max(rem) >= gd:
            d = max(rem)
            qc = rem.pop(d)
            for k, c in g.coeffs.items():
                if k == gd:
                    continue
                e = k + d - gd
                v = rem.get(e, ZERO) - qc * c
                if v.is_zero():
                    rem.pop(e, None)
                else:
                    rem[e] = v
        f, g = g, Laurent._raw(rem)
    if f.is_zero():
        return f
    return f.scale(ONE / f.leading_coeff())
