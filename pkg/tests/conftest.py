"""Shared strategies and helpers for the test suite."""

from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

from kncubic.curve import CurveFunction, CurveSpec, Marking
from kncubic.laurent import Laurent
from kncubic.paramfield import ParamPoly, ParamScalar

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

small_fractions = st.fractions(min_value=Fraction(-4), max_value=Fraction(4),
                               max_denominator=3)
nonzero_fractions = small_fractions.filter(bool)

_exponents = st.tuples(st.integers(0, 2), st.integers(0, 2),
                       st.integers(0, 1), st.integers(0, 1))


@st.composite
def param_polys(draw, max_terms: int = 3):
    terms = draw(st.dictionaries(_exponents, small_fractions,
                                 max_size=max_terms))
    return ParamPoly(terms)


nonzero_polys = param_polys().filter(lambda p: not p.is_zero())


@st.composite
def param_scalars(draw, simple_den: bool = False):
    num = draw(param_polys())
    if simple_den:
        return ParamScalar(num)
    return ParamScalar(num, draw(nonzero_polys))


nonzero_scalars = param_scalars().filter(lambda x: not x.is_zero())


@st.composite
def laurents(draw, lo: int = -2, hi: int = 2):
    coeffs = draw(st.dictionaries(st.integers(lo, hi),
                                  small_fractions.map(ParamScalar),
                                  max_size=3))
    return Laurent(coeffs)


@st.composite
def curve_functions(draw, curve: CurveSpec):
    return CurveFunction(draw(laurents()), draw(laurents()), curve)


TWO = CurveSpec.symbolic(Marking.TWO_POINT)
THREE = CurveSpec.symbolic(Marking.THREE_POINT)
