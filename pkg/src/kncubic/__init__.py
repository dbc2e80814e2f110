"""Exact structure constants of vector-field algebras on marked cubic
curves, their nodal and cuspidal degenerations, and the identification of
the limits with algebras on the projective line."""

from .curve import (CurveFunction, CurveMismatch, CurveSpec, Divisor,
                    Marking, NotMonomialForm, PointId, basis_function,
                    divisor_of_basis, expand_in_basis, f_poly, order_at,
                    validate_marking)
from .degeneration import (DegenerationKind, InvalidCombination, MarkingFate,
                           NonPolynomialResult, NotOnCuspidalCurve,
                           NotOnNodalCurve, Subcase, classify,
                           degenerate_curve, limit_structure_table,
                           marking_fate, pullback_cuspidal_vf, pullback_form,
                           pullback_nodal_vf, pullback_vf)
from .knalgebra import (Expansion, LambdaForm, StructureTable, VectorField,
                        almost_grading_check, basis_form, basis_vf, deg,
                        expected_bracket, function_action, jacobi_residual,
                        lie_bracket, lie_derivative, structure_table)
from .laurent import Laurent
from .p1algebras import (AlphaSquared, ClosureFailure, GradingWitness,
                         IncompatibleCase, PhiMap, case5_closure,
                         grading_respect_witness, phi_apply, phi_case5,
                         phi_cuspidal, phi_nodal_full, phi_w,
                         verify_homomorphism, w_generator, witt_field,
                         z_generator, z_structure_check)
from .paramfield import (DivisionByZero, ParamPoly, ParamScalar,
                         Specialization, SpecializationPole, rat,
                         render_scalar, specialize, sym)
from .projline import P1Form, P1VectorField, TRat, bracket_p1
from .verification import run_suite

__version__ = "0.1.0"
