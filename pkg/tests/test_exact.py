from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chernforge.errors import DuplicateNodes, SingularMatrix
from chernforge.exact import (
    Matrix,
    determinant,
    format_rational,
    lagrange_extrapolate_coeffs,
    parse_rational,
    solve_linear,
    solve_system,
    vandermonde_matrix,
)
from math import comb

from .oracles import cramer_solve, leibniz_det

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10 ** 6)


def test_identity_solve():
    assert solve_linear(Matrix.identity(2), [Fraction(3, 2), -5]) == (Fraction(3, 2), -5)


def test_forward_substitution():
    u, v = Fraction(7, 3), Fraction(-2)
    assert solve_linear(Matrix.from_rows([[1, 0], [1, 1]]), [u, v]) == (u, v - u)


@pytest.mark.parametrize("p", [(1, 2, 3), (5, 7, 13), (Fraction(1, 2), -3, Fraction(4, 9))])
def test_vandermonde_3x3_against_cramer(p):
    p0, p1, p2 = map(Fraction, p)
    rows = vandermonde_matrix(2).to_rows()
    expected = cramer_solve(rows, [p0, p1, p2])
    assert expected == [p0, (4 * p1 - p2 - 3 * p0) / 2, (p2 - 2 * p1 + p0) / 2]
    assert list(solve_linear(vandermonde_matrix(2), [p0, p1, p2])) == expected


def test_vandermonde_matrices():
    assert vandermonde_matrix(2).to_rows() == [[1, 0, 0], [1, 1, 1], [1, 2, 4]]
    assert vandermonde_matrix(0).to_rows() == [[1]]
    assert vandermonde_matrix(3).to_rows() == [[1, 0, 0, 0], [1, 1, 1, 1], [1, 2, 4, 8], [1, 3, 9, 27]]


@pytest.mark.parametrize("r", range(9))
def test_vandermonde_determinant_nonzero(r):
    d = determinant(vandermonde_matrix(r))
    assert d != 0
    if r <= 5:
        assert d == leibniz_det(vandermonde_matrix(r).to_rows())


def test_singular_matrix():
    with pytest.raises(SingularMatrix):
        solve_linear(Matrix.from_rows([[1, 2], [2, 4]]), [1, 2])


def test_lagrange_examples():
    assert lagrange_extrapolate_coeffs([0, 1, 2], -1) == (3, -3, 1)
    assert lagrange_extrapolate_coeffs([0, 1], 0) == (1, 0)
    assert lagrange_extrapolate_coeffs([0, 1, 2, 3], -1) == (4, -6, 4, -1)


@pytest.mark.parametrize("r", range(9))
def test_lagrange_binomial_pattern(r):
    coeffs = lagrange_extrapolate_coeffs(list(range(r + 1)), -1)
    assert coeffs == tuple((-1) ** m * comb(r + 1, m + 1) for m in range(r + 1))


def test_lagrange_duplicate_nodes():
    with pytest.raises(DuplicateNodes):
        lagrange_extrapolate_coeffs([0, 1, 1], 5)


def test_rational_serialization():
    assert format_rational(Fraction(3, 1)) == "3"
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert parse_rational("-3/2") == Fraction(-3, 2)
    assert parse_rational("7") == 7
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_matrix_shape_invariant():
    with pytest.raises(ValueError):
        Matrix(2, 2, (Fraction(1),) * 3)


def test_solve_system_rectangular():
    a = Matrix.from_rows([[1, 1], [2, 2], [0, 1]])
    assert solve_system(a, [3, 6, 1]) == (2, 1)
    assert solve_system(a, [3, 7, 1]) is None
    under = Matrix.from_rows([[1, 2, 3]])
    x = solve_system(under, [6])
    assert under.apply(x) == (6,)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n),
                        st.lists(rationals, min_size=n, max_size=n))))
def test_solve_linear_remultiplies(data):
    rows, b = data
    a = Matrix.from_rows(rows)
    if determinant(a) == 0:
        with pytest.raises(SingularMatrix):
            solve_linear(a, b)
        return
    x = solve_linear(a, b)
    assert a.apply(x) == tuple(b)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_determinant_matches_leibniz(rows):
    assert determinant(Matrix.from_rows(rows)) == leibniz_det([[Fraction(x) for x in r] for r in rows])


@given(rationals, rationals, rationals)
def test_rational_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a * b).denominator > 0
