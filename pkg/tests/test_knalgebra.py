"""Brackets, structure tables, grading and the module actions."""

import pytest
from hypothesis import given

from conftest import TWO, THREE, curve_functions
from kncubic.curve import CurveFunction, CurveMismatch, Marking, basis_function
from kncubic.knalgebra import (Expansion, VectorField, almost_grading_check,
                               basis_form, basis_vf, deg, expansion_of,
                               expected_bracket, function_action,
                               jacobi_residual, lie_bracket, lie_derivative,
                               numeric_table_check, structure_table)
from kncubic.laurent import Laurent
from kncubic.paramfield import E1, E2, E3, ONE, rat


def bracket_expansion(curve, n, m):
    return expansion_of(lie_bracket(basis_vf(curve, n), basis_vf(curve, m)).coeff)


class TestBracket:
    def test_v0_v2(self):
        assert bracket_expansion(TWO, 0, 2) == Expansion({3: rat(2)})

    def test_self_bracket(self):
        for n in (-3, 0, 4):
            assert bracket_expansion(THREE, n, n).is_zero()

    def test_v1_v0_two_point(self):
        want = Expansion({2: rat(-1), -2: (E1 - E2) * (E1 - E3)})
        assert bracket_expansion(TWO, 1, 0) == want

    def test_v1_v3_two_point(self):
        # 2{V5 + 3 e1 V3 + (e1-e2)(e1-e3) V1}
        want = Expansion({5: rat(2), 3: 6 * E1, 1: 2 * (E1 - E2) * (E1 - E3)})
        assert bracket_expansion(TWO, 1, 3) == want

    def test_v1_v0_three_point(self):
        s2 = E1 * E2 + E1 * E3 + E2 * E3
        a = THREE.a
        want = Expansion({2: rat(-1), -2: 3 * a * a + s2,
                          -4: THREE.b_squared * rat(1, 2)})
        assert bracket_expansion(THREE, 1, 0) == want

    def test_mismatch(self):
        with pytest.raises(CurveMismatch):
            lie_bracket(basis_vf(TWO, 0), basis_vf(THREE, 0))

    @given(curve_functions(TWO), curve_functions(TWO))
    def test_antisymmetry(self, f, g):
        v, w = VectorField(f), VectorField(g)
        assert lie_bracket(v, w).coeff == (-lie_bracket(w, v)).coeff


class TestExpectedBracket:
    def test_matches_engine_everywhere(self):
        for curve in (TWO, THREE):
            for n in range(-3, 4):
                for m in range(-3, 4):
                    assert bracket_expansion(curve, n, m) == \
                        expected_bracket(curve, n, m)

    def test_diagonal_zero(self):
        assert expected_bracket(THREE, 4, 4).is_zero()


class TestStructureTable:
    def test_entry(self):
        table = structure_table(TWO, 3)
        assert table.entry(0, 2) == Expansion({3: rat(2)})
        assert table.entry(1, 3) == Expansion(
            {5: rat(2), 3: 6 * E1, 1: 2 * (E1 - E2) * (E1 - E3)})

    def test_antisymmetry(self):
        for curve in (TWO, THREE):
            assert structure_table(curve, 3).antisymmetry_violations() == []

    def test_window_validation(self):
        with pytest.raises(ValueError):
            structure_table(TWO, 0)

    def test_json_shape(self):
        obj = structure_table(TWO, 1).to_json_obj()
        assert set(obj) == {"case", "window", "params", "entries"}
        assert obj["entries"] == sorted(
            obj["entries"], key=lambda d: (d["n"], d["m"]))


class TestGrading:
    def test_deg_two_point(self):
        assert deg(Marking.TWO_POINT, 5) == 5

    def test_deg_three_point(self):
        assert deg(Marking.THREE_POINT, 5) == 2
        assert deg(Marking.THREE_POINT, 4) == 2
        assert deg(Marking.THREE_POINT, -3) == -2

    def test_almost_graded(self):
        for curve, case in ((TWO, Marking.TWO_POINT),
                            (THREE, Marking.THREE_POINT)):
            report = almost_grading_check(structure_table(curve, 5), case)
            assert report.ok

    def test_three_point_tighter_range(self):
        report = almost_grading_check(structure_table(THREE, 5),
                                      Marking.THREE_POINT)
        assert report.observed_lo >= -2 and report.observed_hi <= 1


class TestJacobi:
    def test_examples(self):
        assert jacobi_residual(TWO, 0, 2, 4).is_zero()
        assert jacobi_residual(THREE, 1, 0, 3).is_zero()
        assert jacobi_residual(THREE, 2, 2, -1).is_zero()

    def test_window(self):
        for curve in (TWO, THREE):
            for n in range(-2, 3):
                for m in range(n, 3):
                    for p in range(m, 3):
                        assert jacobi_residual(curve, n, m, p).is_zero()


class TestForms:
    def test_basis_form_weights(self):
        dz = basis_form(THREE, 0, 1)
        assert dz.weight == 1 and dz.coeff == basis_function(THREE, 0)
        assert basis_form(THREE, 0, -1).coeff == basis_vf(THREE, 0).coeff

    def test_lie_derivative_constant(self):
        dz = basis_form(THREE, 0, 1)
        assert lie_derivative(basis_vf(THREE, 0), dz).coeff.is_zero()

    def test_lie_derivative_weight_one(self):
        w = basis_form(THREE, 2, 1)
        out = lie_derivative(basis_vf(THREE, 0), w)
        assert out.weight == 1
        assert expansion_of(out.coeff) == Expansion({3: rat(2)})

    @given(curve_functions(TWO), curve_functions(TWO))
    def test_weight_minus_one_is_bracket(self, f, g):
        from kncubic.knalgebra import LambdaForm
        v, w = VectorField(f), LambdaForm(-1, g)
        assert lie_derivative(v, w).coeff == lie_bracket(v, VectorField(g)).coeff

    def test_function_action(self):
        w = basis_form(THREE, 3, 1)
        out = function_action(basis_function(THREE, 2), w)
        assert expansion_of(out.coeff) == Expansion({5: ONE})
        one = CurveFunction.const(1, THREE)
        assert function_action(one, w).coeff == w.coeff

    @given(curve_functions(TWO), curve_functions(TWO), curve_functions(TWO))
    def test_derivation_compatibility(self, f, g, h):
        from kncubic.knalgebra import LambdaForm
        v = VectorField(f)
        w = LambdaForm(2, h)
        lhs = lie_derivative(v, function_action(g, w))
        rhs_coeff = (f * g.derive_dz()) * h + g * lie_derivative(v, w).coeff
        assert lhs.coeff == rhs_coeff


class TestNumericOracle:
    def test_two_point_clean(self):
        table = structure_table(TWO, 3)
        assert numeric_table_check(TWO, table, trials=4) == []

    def test_three_point_clean(self):
        table = structure_table(THREE, 3)
        assert numeric_table_check(THREE, table, trials=4) == []

    def test_detects_corruption(self):
        table = structure_table(TWO, 2)
        table.entries[(0, 2)] = Expansion({5: rat(3)})  # wrong coefficient
        assert numeric_table_check(TWO, table, trials=2) != []
