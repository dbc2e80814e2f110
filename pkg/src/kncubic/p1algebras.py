"""Target algebras on the projective line and the identification maps.

The full vector-field algebra on the line is spanned by L_n = t^(n+1) d/dt.
Two families of subalgebras appear as degeneration targets:

* W (parameter alpha^2): fields vanishing at both roots of t^2 - alpha^2,
  with a doubled vanishing condition on the odd generators, spanned by
  M_{2k} = t^(2k)(t^2 - alpha^2) d/dt and
  M_{2k+1} = t^(2k-1)(t^2 - alpha^2)^2 d/dt.
* Z (parameter alpha^2): fields with poles only at the two roots and at
  infinity, spanned by H_n = (t^2 - alpha^2)^(n-1) d/dt and
  G_n = t (t^2 - alpha^2)^(n-1) d/dt.

Only alpha^2 ever enters a formula, so the root pair is carried as the
quadratic t^2 - alpha^2 and the arithmetic stays rational.  The class of
identification maps from the degenerate curve algebras, the almost-grading
witnesses, and the closure table of the remaining subalgebra (the odd case
of the nodal three-marking degeneration) are implemented here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .curve import Marking
from .knalgebra import Expansion, StructureTable, deg as kn_deg
from .laurent import Laurent, divexact, try_divexact
from .paramfield import ONE, ParamScalar, rat
from .projline import (P1VectorField, TRat, bracket_p1,
                       denominator_base_power)


class ClosureFailure(ValueError):
    """A bracket left the span of the generator set under test."""


class IncompatibleCase(ValueError):
    """An identification map was paired with the wrong limit table."""


class UnsupportedPoles(ValueError):
    """A field has poles outside the marked points of the algebra."""


@dataclass(frozen=True)
class AlphaSquared:
    """The squared location of the symmetric marking pair; must be nonzero."""

    value: ParamScalar

    def __post_init__(self):
        object.__setattr__(self, "value", ParamScalar._of(self.value))
        if self.value.is_zero():
            raise ValueError("the marking pair must avoid 0 and infinity")


def _alpha2(k2) -> ParamScalar:
    if isinstance(k2, AlphaSquared):
        return k2.value
    return AlphaSquared(k2).value


def _pair_quadratic(alpha2: ParamScalar) -> Laurent:
    return Laurent({2: rat(1), 0: -alpha2})


# ---------------------------------------------------------------------------
# the Witt basis
# ---------------------------------------------------------------------------

def witt_field(n: int) -> P1VectorField:
    """L_n = t^(n+1) d/dt."""
    return P1VectorField(TRat.monomial(n + 1))


def expand_in_L(v: P1VectorField) -> Expansion:
    """Coefficients over the L basis; the field must be Laurent in t."""
    if not v.coeff.is_laurent():
        raise UnsupportedPoles("the field has poles away from 0 and infinity")
    return Expansion({k - 1: c for k, c in v.coeff.num.coeffs.items()})


def witt_from_expansion(exp: Expansion) -> P1VectorField:
    total = P1VectorField(TRat.zero())
    for n, c in exp.terms.items():
        total = total + witt_field(n).scale(c)
    return total


# ---------------------------------------------------------------------------
# generators of the subalgebras
# ---------------------------------------------------------------------------

def w_generator(k2, n: int) -> P1VectorField:
    """M_n: even index t^n(t^2 - a2), odd index t^(n-2)(t^2 - a2)^2."""
    a2 = _alpha2(k2)
    quad = TRat.of(_pair_quadratic(a2))
    k = n // 2
    if n % 2 == 0:
        return P1VectorField(TRat.monomial(2 * k) * quad)
    return P1VectorField(TRat.monomial(2 * k - 1) * quad * quad)


@lru_cache(maxsize=4096)
def _z_generator_cached(a2: ParamScalar, kind: str, n: int) -> P1VectorField:
    body = TRat.of(_pair_quadratic(a2)) ** (n - 1)
    if kind == "G":
        body = TRat.monomial(1) * body
    return P1VectorField(body)


def z_generator(k2, kind: str, n: int) -> P1VectorField:
    """H_n or G_n; for n < 1 the coefficient is rational with poles at the pair."""
    if kind not in ("H", "G"):
        raise ValueError("kind must be 'H' or 'G'")
    return _z_generator_cached(_alpha2(k2), kind, n)


# ---------------------------------------------------------------------------
# even/odd splitting and expansions in the subalgebra bases
# ---------------------------------------------------------------------------

def _split_even_odd(num: Laurent) -> Tuple[Laurent, Laurent]:
    """num(t) = E(t^2) + t*O(t^2); returns E and O as Laurent in s = t^2."""
    even: dict = {}
    odd: dict = {}
    for k, c in num.coeffs.items():
        if k % 2 == 0:
            even[k // 2] = c
        else:
            odd[(k - 1) // 2] = c
    return Laurent._raw(even), Laurent._raw(odd)


def _recenter(p: Laurent, beta: ParamScalar) -> Laurent:
    """Rewrite the polynomial p(s) in powers of w via s = w + beta."""
    if not p.is_polynomial():
        raise ValueError("recentering needs a plain polynomial")
    return p.substitute(Laurent({1: ONE, 0: beta}))


def expand_in_z(v: P1VectorField, k2) -> Dict[Tuple[str, int], ParamScalar]:
    """Expansion over the H/G basis of the pair algebra.

    Requires poles only at the root pair and infinity.  Splitting into
    even and odd parts separates the H and G contributions; recentering
    the even/odd polynomials at the pair quadratic reads the indices off.
    """
    a2 = _alpha2(k2)
    base = _pair_quadratic(a2)
    power = denominator_base_power(v.coeff, base)
    if power is None:
        raise UnsupportedPoles("denominator is not a power of the pair quadratic")
    num = v.coeff.num
    if num.is_zero():
        return {}
    if num.valuation() < 0:
        raise UnsupportedPoles("the pair algebra allows no pole at t = 0")
    even, odd = _split_even_odd(num)
    out: Dict[Tuple[str, int], ParamScalar] = {}
    for kind, part in (("H", even), ("G", odd)):
        if part.is_zero():
            continue
        shifted = _recenter(part, a2)
        for j, c in shifted.coeffs.items():
            out[(kind, j - power + 1)] = c
    return out


def z_from_expansion(terms: Dict[Tuple[str, int], ParamScalar],
                     k2) -> P1VectorField:
    total = P1VectorField(TRat.zero())
    for (kind, n), c in terms.items():
        total = total + z_generator(k2, kind, n).scale(c)
    return total


def expand_in_w(v: P1VectorField, k2) -> Expansion:
    """Expansion over the M basis; ClosureFailure if v is outside the span."""
    a2 = _alpha2(k2)
    if not v.coeff.is_laurent():
        raise ClosureFailure("poles away from 0 and infinity")
    even, odd = _split_even_odd(v.coeff.num)
    quad = Laurent({1: ONE, 0: -a2})  # s - alpha^2
    out: dict = {}
    if not even.is_zero():
        q = try_divexact(even, quad)
        if q is None:
            raise ClosureFailure("even part misses the pair vanishing")
        for k, c in q.coeffs.items():
            out[2 * k] = c
    if not odd.is_zero():
        q = try_divexact(odd, quad * quad)
        if q is None:
            raise ClosureFailure("odd part misses the doubled pair vanishing")
        for k, c in q.coeffs.items():
            out[2 * (k + 1) + 1] = c
    return Expansion(out)


def w_from_expansion(exp: Expansion, k2) -> P1VectorField:
    total = P1VectorField(TRat.zero())
    for n, c in exp.terms.items():
        total = total + w_generator(k2, n).scale(c)
    return total


# ---------------------------------------------------------------------------
# structure and divisor checks for the pair algebra
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    window: int
    violations: List[dict]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_obj(self) -> dict:
        return {"name": self.name, "window": self.window,
                "violations": self.violations}


def z_structure_check(k2, window: int) -> CheckReport:
    """Verify the three bracket families of the pair algebra symbolically."""
    a2 = _alpha2(k2)
    rng = range(-window, window + 1)
    h = {n: z_generator(a2, "H", n) for n in rng}
    g = {n: z_generator(a2, "G", n) for n in rng}

    def gen(kind, n):
        return z_generator(a2, kind, n)

    violations = []
    for n in rng:
        for m in rng:
            pre = rat(2 * (m - n))
            cases = [
                ("[H,H]", bracket_p1(h[n], h[m]),
                 gen("G", n + m - 2).scale(pre)),
                ("[G,G]", bracket_p1(g[n], g[m]),
                 gen("G", n + m - 1).scale(pre)
                 + gen("G", n + m - 2).scale(pre * a2)),
                ("[G,H]", bracket_p1(g[n], h[m]),
                 gen("H", n + m - 1).scale(rat(2 * (m - n) - 1))
                 + gen("H", n + m - 2).scale(pre * a2)),
            ]
            for label, lhs, rhs in cases:
                if lhs.coeff != rhs.coeff:
                    violations.append({"family": label, "n": n, "m": m,
                                       "lhs": lhs.coeff.render(),
                                       "rhs": rhs.coeff.render()})
    return CheckReport("pair-algebra-structure", window, violations)


def z_divisor_check(k2, kind: str, n: int) -> dict:
    """Divisor data of H_n or G_n under the convention div(d/dt) = 2[inf].

    Reports the order at each root of the pair quadratic, at t = 0 and at
    infinity; the total degree of a vector-field divisor on the line is 2.
    """
    if n < 1:
        raise ValueError("polynomial divisor data needs n >= 1")
    a2 = _alpha2(k2)
    coeff = z_generator(a2, kind, n).coeff.as_laurent()
    base = _pair_quadratic(a2)
    pair_order = 0
    rest = coeff
    while True:
        q = try_divexact(rest, base)
        if q is None:
            break
        rest = q
        pair_order += 1
    at_zero = coeff.valuation()
    at_inf = -coeff.degree() + 2
    total = 2 * pair_order + at_zero + at_inf
    return {
        "kind": kind,
        "n": n,
        "orders": {"roots(t^2-alpha^2)": pair_order, "t=0": at_zero,
                   "inf": at_inf},
        "degree": total,
    }


def w_closure_check(k2, window: int) -> CheckReport:
    """Brackets of the M generators expand back in the M basis."""
    a2 = _alpha2(k2)
    rng = range(-window, window + 1)
    gens = {n: w_generator(a2, n) for n in rng}
    violations = []
    for n in rng:
        for m in rng:
            b = bracket_p1(gens[n], gens[m])
            try:
                exp = expand_in_w(b, a2)
            except ClosureFailure as exc:
                violations.append({"n": n, "m": m, "error": str(exc)})
                continue
            if w_from_expansion(exp, a2).coeff != b.coeff:
                violations.append({"n": n, "m": m, "error": "reconstruction"})
    return CheckReport("doubled-pair-closure", window, violations)


# ---------------------------------------------------------------------------
# identification maps
# ---------------------------------------------------------------------------

_PHI_SUBCASES = {
    "cuspidal": {"CuspTwo", "CuspThree"},
    "nodal-full": {"N1", "N3", "N4"},
    "w": {"N2"},
    "case5": {"N5"},
}

_PHI_SOURCE = {
    "cuspidal": Marking.TWO_POINT,
    "nodal-full": Marking.THREE_POINT,
    "w": Marking.TWO_POINT,
    "case5": Marking.THREE_POINT,
}


@dataclass(frozen=True)
class PhiMap:
    """Identification of degenerate curve generators with line fields.

    tag "cuspidal": n -> L_(n+1); "nodal-full": 2k -> H_(k+2),
    2k+1 -> G_(k+2); "w": n -> M_n; "case5": the pulled-back generator
    family of the odd nodal three-marking degeneration (alpha^2 = -3e).
    """

    tag: str
    alpha2: Optional[ParamScalar] = None
    e: Optional[ParamScalar] = None

    def __post_init__(self):
        if self.tag not in _PHI_SUBCASES:
            raise ValueError(f"unknown identification {self.tag!r}")
        if self.alpha2 is not None:
            object.__setattr__(self, "alpha2", ParamScalar._of(self.alpha2))
        if self.e is not None:
            object.__setattr__(self, "e", ParamScalar._of(self.e))
        if self.tag in ("nodal-full", "w") and self.alpha2 is None:
            raise ValueError(f"{self.tag} needs alpha^2")
        if self.tag == "case5":
            if self.e is None:
                raise ValueError("case5 needs the nodal parameter e")
            object.__setattr__(self, "alpha2", -3 * self.e)

    @property
    def source_case(self) -> Marking:
        return _PHI_SOURCE[self.tag]

    def label(self) -> str:
        return self.tag


def phi_cuspidal() -> PhiMap:
    return PhiMap("cuspidal")


def phi_nodal_full(alpha2) -> PhiMap:
    return PhiMap("nodal-full", alpha2=_alpha2(alpha2))


def phi_w(alpha2) -> PhiMap:
    return PhiMap("w", alpha2=_alpha2(alpha2))


def phi_case5(e) -> PhiMap:
    return PhiMap("case5", e=ParamScalar._of(e))


@lru_cache(maxsize=8192)
def phi_apply(phi: PhiMap, n: int) -> P1VectorField:
    """Image of the n-th source generator."""
    if phi.tag == "cuspidal":
        return witt_field(n + 1)
    k = n // 2
    if phi.tag == "nodal-full":
        return z_generator(phi.alpha2, "H" if n % 2 == 0 else "G", k + 2)
    if phi.tag == "w":
        return w_generator(phi.alpha2, n)
    # case5: even 2k -> (t^2+3e)^k (t^2-3e); odd -> t (t^2+3e)^(k-1) (t^2-3e)^2
    e = phi.e
    plus = TRat.of(Laurent({2: rat(1), 0: 3 * e}))
    minus = TRat.of(Laurent({2: rat(1), 0: -3 * e}))
    if n % 2 == 0:
        return P1VectorField(plus ** k * minus)
    return P1VectorField(TRat.monomial(1) * plus ** (k - 1) * minus * minus)


def phi_apply_expansion(phi: PhiMap, exp: Expansion) -> P1VectorField:
    total = P1VectorField(TRat.zero())
    for n, c in exp.terms.items():
        total = total + phi_apply(phi, n).scale(c)
    return total


@dataclass
class PhiReport:
    map: str
    window: int
    violations: List[dict]
    witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_obj(self) -> dict:
        out = {"map": self.map, "window": self.window,
               "violations": self.violations}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def verify_homomorphism(phi: PhiMap, limit_table: StructureTable,
                        window: int) -> PhiReport:
    """Brackets of images against images of the limit-table brackets."""
    parts = limit_table.case.split(":")
    subcase = parts[-1] if len(parts) > 1 else parts[0]
    if subcase not in _PHI_SUBCASES[phi.tag]:
        raise IncompatibleCase(
            f"map {phi.tag!r} does not identify subcase {subcase!r}")
    if window > limit_table.window:
        raise ValueError("window exceeds the limit table")
    images = {}

    def image(n: int) -> P1VectorField:
        if n not in images:
            images[n] = phi_apply(phi, n)
        return images[n]

    violations = []
    for n in range(-window, window + 1):
        for m in range(-window, window + 1):
            lhs = bracket_p1(image(n), image(m))
            rhs = P1VectorField(TRat.zero())
            for idx, c in limit_table.entry(n, m).terms.items():
                rhs = rhs + image(idx).scale(c)
            if lhs.coeff != rhs.coeff:
                violations.append({"n": n, "m": m,
                                   "lhs": lhs.coeff.render(),
                                   "rhs": rhs.coeff.render()})
    return PhiReport(phi.label(), window, violations)


# ---------------------------------------------------------------------------
# almost-grading witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradingWitness:
    """Bounds a*deg(s) - k <= deg(image) <= a*deg(s) + l with a, k, l >= 1.

    raw_lo and raw_hi record the exact shift interval before the
    positivity normalization required of a witness.
    """

    a: int
    k: int
    l: int
    raw_lo: int
    raw_hi: int

    def to_json_obj(self) -> dict:
        return {"a": self.a, "k": self.k, "l": self.l,
                "raw_shift": [self.raw_lo, self.raw_hi]}


def _target_degrees(phi: PhiMap, n: int) -> List[int]:
    if phi.tag == "cuspidal":
        return [n + 1]
    if phi.tag == "w":
        return [n]  # degree transported along the map
    if phi.tag == "nodal-full":
        return [n // 2 + 2]
    terms = expand_in_z(phi_apply(phi, n), phi.alpha2)
    return sorted({idx for (_, idx) in terms})


def grading_respect_witness(phi: PhiMap, index_range: int) -> GradingWitness:
    """Minimal witness with a = 1 over source indices |n| <= index_range."""
    lo = hi = None
    for n in range(-index_range, index_range + 1):
        source = kn_deg(phi.source_case, n)
        for target in _target_degrees(phi, n):
            shift = target - source
            lo = shift if lo is None or shift < lo else lo
            hi = shift if hi is None or shift > hi else hi
    return GradingWitness(1, max(1, -lo), max(1, hi), lo, hi)


# ---------------------------------------------------------------------------
# the omitted subalgebra table (odd nodal three-marking case)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8192)
def _case5_bracket_cached(e: ParamScalar, n: int, m: int) -> Expansion:
    return _case5_bracket_raw(e, n, m)


def case5_bracket(e, n: int, m: int) -> Expansion:
    return _case5_bracket_cached(ParamScalar._of(e), n, m)


def _case5_bracket_raw(e, n: int, m: int) -> Expansion:
    """Bracket of two case-5 generators, expanded back in the generator set.

    The even generators carry one factor of t^2 - 3e and the odd ones two,
    so brackets vanish at the roots of t^2 - 3e.  Exact division by that
    quadratic (squared for the odd part), followed by recentering at the
    marking quadratic t^2 + 3e, produces the expansion; a failed division
    would falsify the closure claim.
    """
    e = ParamScalar._of(e)
    phi = phi_case5(e)
    b = bracket_p1(phi_apply(phi, n), phi_apply(phi, m))
    if b.is_zero():
        return Expansion()
    plus = _pair_quadratic(-3 * e)   # t^2 + 3e
    minus_s = Laurent({1: ONE, 0: -3 * e})   # s - 3e
    power = denominator_base_power(b.coeff, plus)
    if power is None:
        raise ClosureFailure("poles away from the marking pair")
    num = b.coeff.num
    if num.valuation() < 0:
        raise ClosureFailure("unexpected pole at t = 0")
    even, odd = _split_even_odd(num)
    out: dict = {}
    if not even.is_zero():
        q = try_divexact(even, minus_s)
        if q is None:
            raise ClosureFailure("even part misses the node vanishing")
        for j, c in _recenter(q, -3 * e).coeffs.items():
            out[2 * (j - power)] = c
    if not odd.is_zero():
        q = try_divexact(odd, minus_s * minus_s)
        if q is None:
            raise ClosureFailure("odd part misses the doubled node vanishing")
        for j, c in _recenter(q, -3 * e).coeffs.items():
            out[2 * (j - power + 1) + 1] = c
    return Expansion(out)


def case5_closure(e, window: int) -> StructureTable:
    """Structure table of the case-5 subalgebra, computed by closure."""
    e = ParamScalar._of(e)
    entries = {}
    for n in range(-window, window + 1):
        for m in range(-window, window + 1):
            entries[(n, m)] = case5_bracket(e, n, m)
    return StructureTable("three-s:N5-closure", window,
                          {"e": str(e), "alpha^2": str(-3 * e)}, entries)
