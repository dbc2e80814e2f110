"""Witt algebra, the pair subalgebras, identification maps, closure."""

import pytest

from kncubic.degeneration import (DegenerationKind, Subcase, degenerate_curve,
                                  limit_structure_table, pullback_vf)
from kncubic.knalgebra import Expansion, basis_vf
from kncubic.laurent import Laurent
from kncubic.p1algebras import (AlphaSquared, ClosureFailure, IncompatibleCase,
                                UnsupportedPoles, case5_bracket, case5_closure,
                                expand_in_L, expand_in_w, expand_in_z,
                                grading_respect_witness, phi_apply,
                                phi_apply_expansion, phi_case5, phi_cuspidal,
                                phi_nodal_full, phi_w, verify_homomorphism,
                                w_closure_check, w_from_expansion, w_generator,
                                witt_field, z_divisor_check, z_from_expansion,
                                z_generator, z_structure_check)
from kncubic.paramfield import E, ONE, rat
from kncubic.projline import P1VectorField, TRat, bracket_p1

A2 = AlphaSquared(E)  # a free symbol stands in for the squared location
NODAL = DegenerationKind.nodal(E)


class TestWitt:
    def test_fields(self):
        assert witt_field(0).coeff == TRat.monomial(1)
        assert witt_field(-1).coeff == TRat.monomial(0)
        assert witt_field(2).coeff == TRat.monomial(3)

    def test_bracket(self):
        assert bracket_p1(witt_field(1), witt_field(2)).coeff == \
            witt_field(3).coeff
        assert bracket_p1(witt_field(-1), witt_field(1)).coeff == \
            witt_field(0).coeff * 2
        assert bracket_p1(witt_field(4), witt_field(4)).is_zero()

    def test_structure_equation_window(self):
        for n in range(-6, 7):
            for m in range(-6, 7):
                got = bracket_p1(witt_field(n), witt_field(m))
                assert got.coeff == witt_field(n + m).coeff * (m - n)

    def test_expand(self):
        assert expand_in_L(witt_field(2)) == Expansion({2: ONE})
        v = P1VectorField(TRat.of(Laurent({2: ONE, 0: -E})))
        assert expand_in_L(v) == Expansion({1: ONE, -1: -E})
        assert expand_in_L(P1VectorField(TRat.zero())).is_zero()

    def test_expand_rejects_poles(self):
        with pytest.raises(UnsupportedPoles):
            expand_in_L(z_generator(A2, "H", 0))


class TestWGenerators:
    def test_even(self):
        assert expand_in_L(w_generator(A2, 0)) == Expansion({1: ONE, -1: -E})
        assert expand_in_L(w_generator(A2, 2)) == Expansion({3: ONE, 1: -E})

    def test_odd(self):
        want = Expansion({2: ONE, 0: -2 * E, -2: E * E})
        assert expand_in_L(w_generator(A2, 1)) == want

    def test_closure(self):
        assert w_closure_check(A2, 5).ok

    def test_expansion_round_trip(self):
        b = bracket_p1(w_generator(A2, 1), w_generator(A2, 2))
        exp = expand_in_w(b, A2)
        assert w_from_expansion(exp, A2).coeff == b.coeff

    def test_closure_failure_detected(self):
        with pytest.raises(ClosureFailure):
            expand_in_w(witt_field(0), A2)  # t d/dt misses the vanishing


class TestZGenerators:
    def test_examples(self):
        assert z_generator(A2, "H", 2).coeff == \
            TRat.of(Laurent({2: ONE, 0: -E}))
        assert z_generator(A2, "G", 1).coeff == witt_field(0).coeff
        assert z_generator(A2, "H", 1).coeff == witt_field(-1).coeff

    def test_negative_index_is_rational(self):
        h0 = z_generator(A2, "H", 0)
        assert not h0.coeff.is_laurent()

    def test_structure_examples(self):
        assert bracket_p1(z_generator(A2, "H", 2), z_generator(A2, "H", 3)) \
            .coeff == z_generator(A2, "G", 3).coeff * 2
        assert bracket_p1(z_generator(A2, "G", 2),
                          z_generator(A2, "G", 2)).is_zero()
        assert bracket_p1(z_generator(A2, "G", 1), z_generator(A2, "H", 1)) \
            .coeff == -z_generator(A2, "H", 1).coeff

    def test_structure_window(self):
        assert z_structure_check(A2, 4).ok

    def test_divisors(self):
        h2 = z_divisor_check(A2, "H", 2)
        assert h2["orders"] == {"roots(t^2-alpha^2)": 1, "t=0": 0, "inf": 0}
        assert h2["degree"] == 2
        g2 = z_divisor_check(A2, "G", 2)
        assert g2["orders"] == {"roots(t^2-alpha^2)": 1, "t=0": 1, "inf": -1}
        assert g2["degree"] == 2
        h1 = z_divisor_check(A2, "H", 1)
        assert h1["orders"]["inf"] == 2 and h1["degree"] == 2

    def test_expand_round_trip(self):
        b = bracket_p1(z_generator(A2, "G", 0), z_generator(A2, "H", 2))
        terms = expand_in_z(b, A2)
        assert z_from_expansion(terms, A2).coeff == b.coeff

    def test_alpha_squared_nonzero(self):
        with pytest.raises(ValueError):
            AlphaSquared(rat(0))


class TestPullbackIdentities:
    def test_w_equals_ordinary_marking_pullbacks(self):
        curve = degenerate_curve(Subcase.N2)
        k2 = AlphaSquared(3 * E)
        for n in range(-5, 6):
            pulled = pullback_vf(basis_vf(curve, n), NODAL)
            assert w_generator(k2, n).coeff == pulled.coeff, n

    def test_z_equals_marking_hit_pullbacks(self):
        curve = degenerate_curve(Subcase.N1)
        k2 = AlphaSquared(3 * E)
        for k in range(-4, 5):
            even = pullback_vf(basis_vf(curve, 2 * k), NODAL)
            odd = pullback_vf(basis_vf(curve, 2 * k + 1), NODAL)
            assert z_generator(k2, "H", k + 2).coeff == even.coeff
            assert z_generator(k2, "G", k + 2).coeff == odd.coeff


class TestPhi:
    def test_images(self):
        assert phi_apply(phi_cuspidal(), 0).coeff == witt_field(1).coeff
        assert phi_apply(phi_nodal_full(3 * E), 0).coeff == \
            z_generator(AlphaSquared(3 * E), "H", 2).coeff
        assert phi_apply(phi_w(3 * E), 0).coeff == \
            w_generator(AlphaSquared(3 * E), 0).coeff

    def test_case5_images_are_pullbacks(self):
        curve = degenerate_curve(Subcase.N5)
        phi = phi_case5(E)
        for n in range(-4, 5):
            assert phi_apply(phi, n).coeff == \
                pullback_vf(basis_vf(curve, n), NODAL).coeff

    def test_homomorphisms(self):
        plans = [
            (phi_cuspidal(), Subcase.CUSP_TWO, DegenerationKind.cuspidal()),
            (phi_cuspidal(), Subcase.CUSP_THREE, DegenerationKind.cuspidal()),
            (phi_nodal_full(3 * E), Subcase.N1, NODAL),
            (phi_nodal_full(3 * E), Subcase.N3, NODAL),
            (phi_w(3 * E), Subcase.N2, NODAL),
            (phi_case5(E), Subcase.N5, NODAL),
        ]
        for phi, sub, kind in plans:
            table = limit_structure_table(degenerate_curve(sub), kind, 3)
            assert verify_homomorphism(phi, table, 3).ok, (phi.tag, sub)

    def test_incompatible_case(self):
        table = limit_structure_table(degenerate_curve(Subcase.N2), NODAL, 2)
        with pytest.raises(IncompatibleCase):
            verify_homomorphism(phi_cuspidal(), table, 2)

    def test_linear_extension(self):
        phi = phi_cuspidal()
        exp = Expansion({0: rat(2), 3: rat(-1)})
        got = phi_apply_expansion(phi, exp)
        want = witt_field(1).scale(2) - witt_field(4)
        assert got.coeff == want.coeff


class TestGradingWitness:
    def test_cuspidal(self):
        w = grading_respect_witness(phi_cuspidal(), 8)
        assert (w.a, w.k, w.l) == (1, 1, 1)
        assert (w.raw_lo, w.raw_hi) == (1, 1)

    def test_nodal_full(self):
        w = grading_respect_witness(phi_nodal_full(3 * E), 8)
        assert (w.a, w.k, w.l) == (1, 1, 2)
        assert (w.raw_lo, w.raw_hi) == (2, 2)

    def test_w_map(self):
        w = grading_respect_witness(phi_w(3 * E), 8)
        assert (w.a, w.k, w.l) == (1, 1, 1)
        assert (w.raw_lo, w.raw_hi) == (0, 0)

    def test_case5(self):
        w = grading_respect_witness(phi_case5(E), 8)
        assert w.a == 1 and w.k <= 3 and w.l <= 3
        assert (w.raw_lo, w.raw_hi) == (0, 2)

    def test_direct_scan_oracle(self):
        # recompute the nodal-full shifts by hand: V_2k and V_2k+1 have
        # degree k upstairs and land on generators of degree k + 2
        shifts = set()
        for n in range(-8, 9):
            source = n // 2
            target = n // 2 + 2
            shifts.add(target - source)
        assert shifts == {2}


class TestCase5Closure:
    def test_bracket_in_span(self):
        exp = case5_bracket(E, 0, 2)
        assert not exp.is_zero()
        phi = phi_case5(E)
        rebuilt = phi_apply_expansion(phi, exp)
        direct = bracket_p1(phi_apply(phi, 0), phi_apply(phi, 2))
        assert rebuilt.coeff == direct.coeff

    def test_expected_entry(self):
        # [W0, W2] = 2 W3 by direct polynomial computation
        assert case5_bracket(E, 0, 2) == Expansion({3: rat(2)})

    def test_table(self):
        table = case5_closure(E, 3)
        assert table.antisymmetry_violations() == []
        assert table.entry(1, 1).is_zero()

    def test_matches_limit_table(self):
        # closure downstairs reproduces the specialized table upstairs
        limit = limit_structure_table(degenerate_curve(Subcase.N5), NODAL, 3)
        table = case5_closure(E, 3)
        assert table.entries == limit.entries

    def test_numeric_value(self):
        e3 = rat(-3)
        exp = case5_bracket(e3, 1, 2)
        phi = phi_case5(e3)
        lhs = bracket_p1(phi_apply(phi, 1), phi_apply(phi, 2)).coeff
        rhs = TRat.zero()
        for idx, c in exp.terms.items():
            rhs = rhs + phi_apply(phi, idx).coeff * c
        t0 = rat(5)
        assert lhs.evaluate(t0) == rhs.evaluate(t0)
