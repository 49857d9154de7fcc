"""
Tests for exact rationals, Novikov rational functions and rational matrices.
"""

from fractions import Fraction

import pytest

from orbiflop.algebra import (
    QuantumRational,
    RationalMatrix,
    inverse,
    kernel,
    primitive,
    qr_arith,
    qr_substitute_inverse,
    rank,
    series_expand,
    to_rational,
)
from orbiflop.utils.errors import SeriesExpansionError, VariableMismatchError


class TestToRational:
    """Test coercion of exact scalars."""

    def test_parses_fraction_string(self):
        assert to_rational("1/8") == Fraction(1, 8)
        assert to_rational(" -3/6 ") == Fraction(-1, 2)

    def test_accepts_int_and_fraction(self):
        assert to_rational(4) == Fraction(4)
        assert to_rational(Fraction(2, 3)) == Fraction(2, 3)

    def test_rejects_float(self):
        with pytest.raises(ValueError):
            to_rational(0.5)

    def test_rejects_bool(self):
        with pytest.raises(ValueError):
            to_rational(True)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            to_rational("one half")


class TestQuantumRationalCanonicalForm:
    """Test reduction to lowest terms with a monic denominator."""

    def test_common_factor_cancels(self):
        f = QuantumRational("t", (0, 2), (0, 4))
        assert f.is_constant
        assert f == Fraction(1, 2)

    def test_denominator_is_monic(self):
        f = QuantumRational("t", (2,), (2, -2))
        assert f.denominator == (Fraction(-1), Fraction(1))
        assert f.numerator == (Fraction(-1),)

    def test_zero_has_unit_denominator(self):
        f = QuantumRational("t", (0, 0), (3, 1))
        assert f.is_zero
        assert f.denominator == (Fraction(1),)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            QuantumRational("t", (1,), (0,))

    def test_constants_ignore_variable(self):
        assert QuantumRational.constant(3, "t1") == QuantumRational.constant(3, "t2")

    def test_equal_functions_hash_alike(self):
        f = QuantumRational("t", (0, 2), (2, -2))
        g = QuantumRational("t", (0, 1), (1, -1))
        assert f == g
        assert hash(f) == hash(g)

    def test_json_round_trip(self):
        f = QuantumRational.multiple_cover("t", 3, Fraction(-27, 2))
        assert QuantumRational.from_json(f.to_json()) == f


class TestQuantumRationalArithmetic:
    """Test field operations and the flop substitution."""

    def test_flop_scalar_identity(self):
        """t/(1-t) + t^-1/(1-t^-1) = -1."""
        f = QuantumRational.multiple_cover("t", 1)
        assert f + qr_substitute_inverse(f) == -1

    def test_substitution_of_multiple_cover(self):
        f = QuantumRational.multiple_cover("t", 2, 8)
        g = qr_substitute_inverse(f)
        expected = QuantumRational("t", (-8,), (1, 0, -1))
        assert g == expected

    def test_substitution_is_involution(self):
        f = QuantumRational("t", (1, 2), (3, 0, -1))
        assert f.substitute_inverse().substitute_inverse() == f

    def test_substitution_of_monomial(self):
        assert QuantumRational.monomial("t", 3, 2).substitute_inverse() == QuantumRational.monomial("t", -3, 2)

    def test_qr_arith_ops(self):
        f = QuantumRational.monomial("t", 1)
        g = QuantumRational.constant(1)
        assert qr_arith(f, g, "add") == QuantumRational("t", (1, 1))
        assert qr_arith(f, g, "sub") == QuantumRational("t", (-1, 1))
        assert qr_arith(f, f, "mul") == QuantumRational.monomial("t", 2)

    def test_unknown_op_rejected(self):
        f = QuantumRational.monomial("t", 1)
        with pytest.raises(ValueError):
            qr_arith(f, f, "div")

    def test_variable_mismatch(self):
        f = QuantumRational.multiple_cover("t1", 1)
        g = QuantumRational.multiple_cover("t2", 1)
        with pytest.raises(VariableMismatchError):
            f + g

    def test_constant_combines_with_any_variable(self):
        f = QuantumRational.multiple_cover("t1", 1)
        total = QuantumRational.constant(2, "t2") + f
        assert total.variable == "t1"

    def test_evaluate(self):
        f = QuantumRational.multiple_cover("t", 2, 8)
        assert f.evaluate(Fraction(1, 2)) == Fraction(8, 3)

    def test_evaluate_at_pole(self):
        with pytest.raises(ZeroDivisionError):
            QuantumRational.multiple_cover("t", 1).evaluate(1)


class TestSeries:
    """Test power-series expansion at t = 0."""

    def test_multiple_cover_series(self):
        f = QuantumRational.multiple_cover("t", 2)
        assert series_expand(f, 6) == [0, 0, 1, 0, 1, 0, 1]

    def test_geometric_series_with_coefficient(self):
        f = QuantumRational("t", (3,), (1, -2))
        assert series_expand(f, 4) == [3, 6, 12, 24, 48]

    def test_pole_at_zero(self):
        with pytest.raises(SeriesExpansionError):
            series_expand(QuantumRational.monomial("t", -1), 3)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            series_expand(QuantumRational.constant(1), -1)


class TestRationalMatrix:
    """Test exact kernels, ranks and inverses."""

    def test_kernel_of_row(self):
        m = RationalMatrix.from_rows([[1, 1]])
        assert kernel(m) == [(Fraction(1), Fraction(-1))]

    def test_kernel_of_identity_is_trivial(self):
        assert kernel(RationalMatrix.identity(2)) == []

    def test_kernel_of_zero_row(self):
        basis = kernel(RationalMatrix.from_rows([[0, 0]]))
        assert len(basis) == 2

    def test_kernel_of_chain(self):
        m = RationalMatrix.from_rows([[1, 1, 0], [0, 1, 1]])
        assert kernel(m) == [(Fraction(1), Fraction(-1), Fraction(1))]

    def test_kernel_without_rows(self):
        m = RationalMatrix.from_rows([], cols=3)
        assert len(kernel(m)) == 3

    def test_kernel_vectors_annihilated(self):
        m = RationalMatrix.from_rows([[1, 2, 3, 4], ["1/2", 0, -1, 2]])
        for v in kernel(m):
            assert m.apply(v) == (0, 0)

    def test_rank(self):
        assert rank(RationalMatrix.from_rows([[1, 2], [2, 4]])) == 1
        assert rank(RationalMatrix.identity(3)) == 3

    def test_inverse(self):
        m = RationalMatrix.from_rows([[2, 0], [0, 4]])
        assert inverse(m).entries == ((Fraction(1, 2), 0), (0, Fraction(1, 4)))

    def test_singular_inverse(self):
        with pytest.raises(ValueError):
            inverse(RationalMatrix.from_rows([[1, 2], [2, 4]]))

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError):
            RationalMatrix.from_rows([[1, 2], [3]])

    def test_primitive(self):
        assert primitive((Fraction(1, 2), Fraction(-1, 3))) == (3, -2)
        assert primitive((Fraction(0), Fraction(-4), Fraction(6))) == (0, 2, -3)

    def test_column_scaling(self):
        m = RationalMatrix.from_rows([[1, 1]]).scale_columns([1, -1])
        assert m.entries == ((1, -1),)
