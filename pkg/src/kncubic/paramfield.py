"""Exact arithmetic over the parameter field.

Every coefficient in the engine lives in Q(e1, e2, a, e): rational
functions, with arbitrary-precision rational number coefficients, in the
branch parameters e1, e2, the marking coordinate a, and the degeneration
parameter e.  The third branch value e3 is never stored: it is eliminated
at construction through e3 = -e1 - e2, which keeps the coefficient ring a
free polynomial ring and makes gcd-based canonical forms available.

A :class:`ParamScalar` is always held in a canonical reduced form (common
polynomial factors cancelled, integer coefficients with joint content 1,
positive leading denominator coefficient under graded lexicographic order
with e1 > e2 > a > e), so equality is plain structural equality and the
text rendering is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Mapping, Union

SYMBOLS = ("e1", "e2", "a", "e")
NVARS = len(SYMBOLS)

_F0 = Fraction(0)
_F1 = Fraction(1)
_ZERO_EXPS = (0,) * NVARS


class DivisionByZero(ZeroDivisionError):
    """Division of a ParamScalar by zero."""


class SpecializationPole(ZeroDivisionError):
    """A denominator vanishes at the requested specialization."""


class ExactDivisionError(ArithmeticError):
    """Polynomial division was requested but is not exact."""


def _grlex_key(exps):
    return (sum(exps), exps)


class ParamPoly:
    """Sparse multivariate polynomial over Q in the symbols e1, e2, a, e.

    Terms map exponent 4-tuples to nonzero Fraction coefficients.  The
    monomial order used everywhere is graded lexicographic with
    e1 > e2 > a > e.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Union[Mapping, Iterable, None] = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        clean: dict = {}
        for exps, c in items:
            if not isinstance(c, Fraction):
                c = Fraction(c)
            e = tuple(exps)
            if len(e) != NVARS or any(k < 0 or not isinstance(k, int) for k in e):
                raise ValueError(f"bad exponent vector {e!r}")
            c = clean.get(e, _F0) + c
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "ParamPoly":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "ParamPoly":
        c = c if isinstance(c, Fraction) else Fraction(c)
        return cls._raw({_ZERO_EXPS: c} if c else {})

    @classmethod
    def symbol(cls, name: str) -> "ParamPoly":
        i = SYMBOLS.index(name)
        exps = tuple(1 if j == i else 0 for j in range(NVARS))
        return cls._raw({exps: _F1})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXPS in self.terms)

    def is_one(self) -> bool:
        return self.terms.get(_ZERO_EXPS) == 1 and len(self.terms) == 1

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.terms.get(_ZERO_EXPS, _F0)

    def leading(self):
        """Leading (monomial, coefficient) under grlex, or None if zero."""
        if not self.terms:
            return None
        m = max(self.terms, key=_grlex_key)
        return m, self.terms[m]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "ParamPoly") -> "ParamPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, _F0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return ParamPoly._raw(out)

    def __sub__(self, other: "ParamPoly") -> "ParamPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, _F0) - c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return ParamPoly._raw(out)

    def __neg__(self) -> "ParamPoly":
        return ParamPoly._raw({e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "ParamPoly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return ParamPoly._raw({})
            return ParamPoly._raw({e: c * other for e, c in self.terms.items()})
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            if e2 == _ZERO_EXPS:
                return ParamPoly._raw({e: c * c2 for e, c in self.terms.items()})
            return ParamPoly._raw(
                {tuple(a + b for a, b in zip(e, e2)): c * c2
                 for e, c in self.terms.items()})
        if len(self.terms) == 1:
            return other * self
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, _F0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return ParamPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ParamPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        acc = ParamPoly.const(1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamPoly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"ParamPoly({render_poly(self)})"


_P0 = ParamPoly._raw({})
_P1 = ParamPoly._raw({_ZERO_EXPS: _F1})


# ---------------------------------------------------------------------------
# exact division and gcd
# ---------------------------------------------------------------------------

def poly_divexact(f: ParamPoly, g: ParamPoly) -> ParamPoly:
    """Exact polynomial division f / g; raises ExactDivisionError otherwise.

    Repeatedly cancels grlex leading terms.  If g divides f the leading
    term of every intermediate remainder is divisible by the leading term
    of g, so the loop either terminates with remainder zero or detects a
    non-exact division.
    """
    if g.is_zero():
        raise DivisionByZero("polynomial division by zero")
    if f.is_zero():
        return _P0
    if g.is_const():
        return f * (_F1 / g.const_value())
    rem = dict(f.terms)
    quo: dict = {}
    g_m, g_c = g.leading()
    while rem:
        m = max(rem, key=_grlex_key)
        c = rem.pop(m)
        diff = tuple(a - b for a, b in zip(m, g_m))
        if any(d < 0 for d in diff):
            raise ExactDivisionError("division is not exact")
        qc = c / g_c
        quo[diff] = qc
        for e2, c2 in g.terms.items():
            if e2 == g_m:
                continue
            e = tuple(a + b for a, b in zip(diff, e2))
            v = rem.get(e, _F0) - qc * c2
            if v:
                rem[e] = v
            else:
                rem.pop(e, None)
    return ParamPoly._raw(quo)


def _main_var(f: ParamPoly, g: ParamPoly):
    for i in range(NVARS):
        if any(e[i] for e in f.terms) or any(e[i] for e in g.terms):
            return i
    return None


def _to_uni(f: ParamPoly, i: int) -> dict:
    """View f as a univariate polynomial in symbol i with ParamPoly coefficients."""
    out: dict = {}
    for exps, c in f.terms.items():
        d = exps[i]
        rest = exps[:i] + (0,) + exps[i + 1:]
        out.setdefault(d, {})[rest] = c
    return {d: ParamPoly._raw(m) for d, m in out.items()}

def _from_uni(u: dict, i: int) -> ParamPoly:
    terms: dict = {}
    for d, p in u.items():
        for exps, c in p.terms.items():
            terms[exps[:i] + (d,) + exps[i + 1:]] = c
    return ParamPoly._raw(terms)


def _uni_content(u: dict) -> ParamPoly:
    c = _P0
    for p in u.values():
        c = poly_gcd(c, p)
        if c.is_one():
            break
    return c


def _uni_prim(u: dict, content: ParamPoly) -> dict:
    if content.is_one():
        return u
    return {d: poly_divexact(p, content) for d, p in u.items()}


def _uni_prem(F: dict, G: dict) -> dict:
    """Pseudo-remainder of F by G (univariate, polynomial coefficients).

    Uses the division-free update R := lc(G)*R - lead(R)*x^(d-m)*G, which
    scales the true remainder by a power of lc(G); harmless here because
    the caller takes primitive parts.
    """
    m = max(G)
    lg = G[m]
    R = {d: c for d, c in F.items() if not c.is_zero()}
    while R and max(R) >= m:
        d = max(R)
        lead = R[d]
        new: dict = {}
        for k, c in R.items():
            if k != d:
                new[k] = c * lg
        for k, c in G.items():
            if k == m:
                continue
            e = k + d - m
            v = new.get(e, _P0) - lead * c
            if v.is_zero():
                new.pop(e, None)
            else:
                new[e] = v
        R = new
    return R


def _prs_gcd(f: ParamPoly, g: ParamPoly) -> ParamPoly:
    """Content/primitive-part pseudo-remainder gcd (correct, can be slow)."""
    if f.is_zero():
        return _gcd_normalize(g)
    if g.is_zero():
        return _gcd_normalize(f)
    i = _main_var(f, g)
    if i is None:
        return _P1
    F, G = _to_uni(f, i), _to_uni(g, i)
    cf, cg = _uni_content(F), _uni_content(G)
    F, G = _uni_prim(F, cf), _uni_prim(G, cg)
    c = _prs_gcd(cf, cg)
    if max(F) < max(G):
        F, G = G, F
    while G:
        R = _uni_prem(F, G)
        F, G = G, _uni_prim(R, _uni_content(R)) if R else {}
    prim = _from_uni(F, i)
    return _gcd_normalize(c * prim)


def _int_primitive(p: ParamPoly) -> ParamPoly:
    """Scale to integer coefficients with content 1 (sign untouched)."""
    lcm = 1
    for c in p.terms.values():
        lcm = lcm * c.denominator // int_gcd(lcm, c.denominator)
    g = 0
    for c in p.terms.values():
        g = int_gcd(g, int(c * lcm))
    unit = Fraction(lcm, g) if g else _F1
    return p * unit if unit != 1 else p


def _max_norm(p: ParamPoly) -> int:
    return max(abs(int(c)) for c in p.terms.values())


def _eval_var(p: ParamPoly, i: int, xi: int) -> ParamPoly:
    out: dict = {}
    for e, c in p.terms.items():
        e2 = e[:i] + (0,) + e[i + 1:]
        v = out.get(e2, _F0) + c * xi ** e[i]
        if v:
            out[e2] = v
        else:
            out.pop(e2, None)
    return ParamPoly._raw(out)


def _symmetric_mod(p: ParamPoly, xi: int) -> ParamPoly:
    out = {}
    half = xi // 2
    for e, c in p.terms.items():
        r = int(c) % xi
        if r > half:
            r -= xi
        if r:
            out[e] = Fraction(r)
    return ParamPoly._raw(out)


def _heu_gcd(f: ParamPoly, g: ParamPoly, tries: int = 6):
    """Heuristic gcd over Z by evaluation at a large integer and base-xi
    lifting, verified by trial division.

    Inputs must have integer coefficients.  The result is the gcd in
    Z[symbols] including its integer content; the content is meaningful at
    the recursive levels, where it carries the image of the evaluated
    variables, so it is never stripped here.  Returns None when every
    attempt fails and the caller should fall back to the remainder
    sequence.
    """
    active = [i for i in range(NVARS)
              if any(e[i] for e in f.terms) or any(e[i] for e in g.terms)]
    if not active:
        return ParamPoly.const(int_gcd(int(f.const_value()),
                                       int(g.const_value())))

    def max_deg(i):
        return max(max((e[i] for e in f.terms), default=0),
                   max((e[i] for e in g.terms), default=0))

    x = min(active, key=max_deg)
    xi = 2 * min(_max_norm(f), _max_norm(g)) + 29
    for _ in range(tries):
        ff, gg = _eval_var(f, x, xi), _eval_var(g, x, xi)
        if not (ff.is_zero() or gg.is_zero()):
            gamma = _heu_gcd(ff, gg, tries)
            if gamma is not None:
                lifted: dict = {}
                j = 0
                while not gamma.is_zero() and j <= max_deg(x) + 1:
                    c = _symmetric_mod(gamma, xi)
                    for e, v in c.terms.items():
                        lifted[e[:x] + (j,) + e[x + 1:]] = v
                    rest = {}
                    for e, v in (gamma - c).terms.items():
                        rest[e] = v / xi
                    gamma = ParamPoly._raw(rest)
                    j += 1
                if gamma.is_zero() and lifted:
                    h = ParamPoly._raw(lifted)
                    if _divides_z(h, f) and _divides_z(h, g):
                        return h
        xi = xi * 73794 // 27011 + 11
    return None


def _divides_z(h: ParamPoly, f: ParamPoly) -> bool:
    """Exact divisibility in Z[symbols]: quotient must be integral too."""
    try:
        q = poly_divexact(f, h)
    except ExactDivisionError:
        return False
    return all(c.denominator == 1 for c in q.terms.values())


def poly_gcd(f: ParamPoly, g: ParamPoly) -> ParamPoly:
    """Gcd of multivariate polynomials over Q, in canonical unit form
    (integer coefficients, content 1, positive grlex leading coefficient).

    The evaluation heuristic does the work; the pseudo-remainder sequence
    is the correctness fallback for the rare inputs the heuristic declines.
    """
    if f.is_zero():
        return _gcd_normalize(g)
    if g.is_zero():
        return _gcd_normalize(f)
    fi, gi = _int_primitive(f), _int_primitive(g)
    h = _heu_gcd(fi, gi)
    if h is None:
        return _prs_gcd(fi, gi)
    return _gcd_normalize(h)


def _gcd_normalize(p: ParamPoly) -> ParamPoly:
    """Unit-normalize: integer coefficients, content 1, positive grlex lead."""
    if p.is_zero():
        return _P0
    lcm = 1
    for c in p.terms.values():
        lcm = lcm * c.denominator // int_gcd(lcm, c.denominator)
    scaled = {e: c * lcm for e, c in p.terms.items()}
    g = 0
    for c in scaled.values():
        g = int_gcd(g, int(c))
    lead = max(scaled, key=_grlex_key)
    sign = 1 if scaled[lead] > 0 else -1
    unit = Fraction(sign, g) if g else _F1
    return ParamPoly._raw({e: c * unit for e, c in scaled.items()})


# ---------------------------------------------------------------------------
# the field of fractions
# ---------------------------------------------------------------------------

class ParamScalar:
    """Element of Q(e1, e2, a, e) in canonical reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = ParamPoly.const(num)
        if den is None:
            den = _P1
        elif isinstance(den, (int, Fraction)):
            den = ParamPoly.const(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num, self.den = _P0, _P1
            self._hash = None
            return
        if den.is_one() and all(c.denominator == 1
                                for c in num.terms.values()):
            # already canonical: integral, joint content 1 against den = 1
            self.num, self.den = num, _P1
            self._hash = None
            return
        while not (num.is_const() or den.is_const()):
            g = poly_gcd(num, den)
            if g.is_one():
                break
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
        # joint integer normalization: coefficients integral and coprime,
        # leading denominator coefficient positive
        lcm = 1
        for c in num.terms.values():
            lcm = lcm * c.denominator // int_gcd(lcm, c.denominator)
        for c in den.terms.values():
            lcm = lcm * c.denominator // int_gcd(lcm, c.denominator)
        g = 0
        for c in num.terms.values():
            g = int_gcd(g, int(c * lcm))
        for c in den.terms.values():
            g = int_gcd(g, int(c * lcm))
        lead = den.leading()
        sign = 1 if lead[1] > 0 else -1
        unit = Fraction(sign * lcm, g)
        if unit != 1:
            num = num * unit
            den = den * unit
        self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _of(cls, x) -> "ParamScalar":
        if isinstance(x, ParamScalar):
            return x
        return cls(x)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_rational(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a plain rational")
        return self.num.const_value() / self.den.const_value()

    def free_symbols(self) -> set:
        out = set()
        for p in (self.num, self.den):
            for e in p.terms:
                out.update(SYMBOLS[i] for i, k in enumerate(e) if k)
        return out

    # -- field operations ---------------------------------------------

    def __add__(self, other) -> "ParamScalar":
        other = ParamScalar._of(other)
        return ParamScalar(self.num * other.den + other.num * self.den,
                           self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "ParamScalar":
        other = ParamScalar._of(other)
        return ParamScalar(self.num * other.den - other.num * self.den,
                           self.den * other.den)

    def __rsub__(self, other) -> "ParamScalar":
        return ParamScalar._of(other) - self

    def __neg__(self) -> "ParamScalar":
        return ParamScalar(-self.num, self.den)

    def __mul__(self, other) -> "ParamScalar":
        other = ParamScalar._of(other)
        return ParamScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ParamScalar":
        other = ParamScalar._of(other)
        if other.is_zero():
            raise DivisionByZero("division by zero scalar")
        return ParamScalar(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "ParamScalar":
        return ParamScalar._of(other) / self

    def __pow__(self, k: int) -> "ParamScalar":
        if k == 0:
            return ParamScalar(1)
        if k < 0:
            if self.is_zero():
                raise DivisionByZero("negative power of zero")
            return ParamScalar(self.den ** (-k), self.num ** (-k))
        return ParamScalar(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ParamScalar(other)
        return (isinstance(other, ParamScalar)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        return render_scalar(self)

    def __repr__(self) -> str:
        return f"ParamScalar({render_scalar(self)})"


ZERO = ParamScalar(0)
ONE = ParamScalar(1)
HALF = ParamScalar(1, 2)


def sym(name: str) -> ParamScalar:
    """The symbol with the given name, as a scalar."""
    return ParamScalar(ParamPoly.symbol(name))


def rat(p, q=1) -> ParamScalar:
    """The rational number p/q as a scalar."""
    return ParamScalar(Fraction(p, q))


E1 = sym("e1")
E2 = sym("e2")
A = sym("a")
E = sym("e")
E3 = -E1 - E2  # eliminated symbol, provided for convenience


# ---------------------------------------------------------------------------
# specialization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Specialization:
    """Assignment of scalar values to a subset of the symbols.

    Values may themselves involve remaining free symbols, e.g. e1 -> -2e.
    """

    assignments: Mapping[str, ParamScalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for name, value in dict(self.assignments).items():
            if name not in SYMBOLS:
                raise ValueError(f"unknown symbol {name!r}")
            clean[name] = ParamScalar._of(value)
        object.__setattr__(self, "assignments", clean)

    @classmethod
    def of(cls, **kwargs) -> "Specialization":
        return cls({k: ParamScalar._of(v) for k, v in kwargs.items()})

    def __hash__(self):
        return hash(tuple(sorted(self.assignments.items())))


def _specialize_poly(p: ParamPoly, s: Specialization) -> ParamScalar:
    total = ZERO
    assigned = s.assignments
    for exps, c in p.terms.items():
        factor = ParamScalar(c)
        residual = [0] * NVARS
        for i, k in enumerate(exps):
            if not k:
                continue
            name = SYMBOLS[i]
            if name in assigned:
                factor = factor * assigned[name] ** k
            else:
                residual[i] = k
        if any(residual):
            factor = factor * ParamScalar(ParamPoly._raw({tuple(residual): _F1}))
        total = total + factor
    return total


def specialize(x: ParamScalar, s: Specialization) -> ParamScalar:
    """Substitute assigned symbols by their values.

    Raises SpecializationPole when the denominator vanishes at s.  Acts as
    a field homomorphism on the subfield where it is defined.
    """
    if not s.assignments:
        return x
    num = _specialize_poly(x.num, s)
    den = _specialize_poly(x.den, s)
    if den.is_zero():
        raise SpecializationPole(f"denominator {render_poly(x.den)} vanishes")
    return num / den


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _render_term(exps, coeff: Fraction, names) -> str:
    parts = []
    mags = abs(coeff)
    syms = [f"{names[i]}^{k}" if k > 1 else names[i]
            for i, k in enumerate(exps) if k]
    if mags != 1 or not syms:
        parts.append(str(mags))
    parts.extend(syms)
    return "*".join(parts)


def render_poly(p: ParamPoly, names=SYMBOLS) -> str:
    """Canonical text form: grlex-descending terms, explicit * and ^."""
    if p.is_zero():
        return "0"
    out = []
    for exps in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[exps]
        term = _render_term(exps, c, names)
        if not out:
            out.append(term if c > 0 else "-" + term)
        else:
            out.append(("+ " if c > 0 else "- ") + term)
    return " ".join(out)


def _rewrite_e3(p: ParamPoly) -> ParamPoly:
    """Display-only change of coordinates e2 = -e1 - e3.

    The returned poly reuses slot 1 for the exponent of e3, so it must be
    rendered with the name list ("e1", "e3", "a", "e").
    """
    minus_e1_e3 = ParamPoly._raw({(1, 0, 0, 0): Fraction(-1),
                                  (0, 1, 0, 0): Fraction(-1)})
    out = _P0
    for exps, c in p.terms.items():
        base = ParamPoly._raw({(exps[0], 0, exps[2], exps[3]): c})
        out = out + base * minus_e1_e3 ** exps[1]
    return out


def render_scalar(x: ParamScalar, use_e3: bool = False) -> str:
    """Canonical text rendering; the exact payload of JSON outputs.

    With use_e3, the polynomial is rewritten in the coordinates
    (e1, e3, a, e) by substituting e2 = -e1 - e3.
    """
    num, den = x.num, x.den
    names = SYMBOLS
    if use_e3:
        num, den = _rewrite_e3(num), _rewrite_e3(den)
        names = ("e1", "e3", "a", "e")
    if den.is_one():
        return render_poly(num, names)
    return f"({render_poly(num, names)})/({render_poly(den, names)})"
