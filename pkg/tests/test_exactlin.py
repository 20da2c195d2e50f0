from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ladderlab.exactlin import (
    GF, QQ, Matrix, field_from_json, inverse, kernel_basis, kron, rank, solve,
)

F = GF(101)
residues = st.integers(min_value=-10**6, max_value=10**6)


def matrices(rows, cols, field=F, elems=residues):
    return st.lists(st.lists(elems, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda rs: Matrix(field, rs)
    )


shapes = st.tuples(st.integers(1, 6), st.integers(1, 8))


@st.composite
def any_matrix(draw, field=F):
    r, c = draw(shapes)
    return draw(matrices(r, c, field))


def test_rejects_composite_modulus():
    with pytest.raises(ValueError):
        GF(100)


def test_values_reduced_into_range():
    m = Matrix(F, [[-1, 205], [101, 0]])
    assert m.tolist() == [[100, 3], [0, 0]]


def test_rationals_normalised():
    m = Matrix(QQ, [[Fraction(2, -4)]])
    x = m.entry(0, 0)
    assert x == Fraction(-1, 2) and x.denominator == 2


@given(residues.filter(lambda x: x % 101))
def test_inverse_in_gf(x):
    assert F.element(x) * F.inv(x) % 101 == 1


def test_kernel_of_identity_is_empty():
    assert kernel_basis(Matrix.identity(F, 2)).shape == (2, 0)


def test_kernel_of_row_of_ones():
    kb = kernel_basis(Matrix(F, [[1, 1]]))
    assert kb.shape == (2, 1)
    v = kb.tolist()
    assert (v[1][0] * 100) % 101 == v[0][0]


@settings(max_examples=60, deadline=None)
@given(any_matrix())
def test_kernel_is_annihilated_and_complementary(m):
    kb = kernel_basis(m)
    assert kb.cols == m.cols - rank(m)
    assert (m @ kb).is_zero()
    assert rank(kb) == kb.cols


@settings(max_examples=60, deadline=None)
@given(any_matrix(), st.data())
def test_solve_consistent_system(a, data):
    x0 = data.draw(matrices(a.cols, 1))
    b = a @ x0
    x = solve(a, b)
    assert x is not None and a @ x == b


def test_solve_identity_and_inconsistent():
    b = Matrix(F, [[3], [4]])
    assert solve(Matrix.identity(F, 2), b) == b
    assert solve(Matrix.zeros(F, 2, 2), b) is None


@settings(max_examples=30, deadline=None)
@given(matrices(3, 3, QQ, st.fractions(min_value=-20, max_value=20, max_denominator=7)))
def test_rational_inverse(m):
    if rank(m) == 3:
        assert m @ inverse(m) == Matrix.identity(QQ, 3)


def test_kron_identities():
    assert kron(Matrix.identity(F, 2), Matrix.identity(F, 3)) == Matrix.identity(F, 6)
    a = Matrix(F, [[1, 2], [3, 4]])
    assert kron(a, Matrix.identity(F, 1)) == a


@settings(max_examples=40, deadline=None)
@given(matrices(2, 2), matrices(2, 2), matrices(2, 2), matrices(2, 2))
def test_kron_mixed_product(a, b, c, d):
    assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)


@settings(max_examples=40, deadline=None)
@given(matrices(2, 3), matrices(3, 2), matrices(2, 2))
def test_ring_axioms(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert a @ b + c == c + a @ b
    assert (a @ b) - (a @ b) == Matrix.zeros(F, 2, 2)


def test_matrices_are_immutable():
    m = Matrix(F, [[1]])
    with pytest.raises(ValueError):
        m.a[0, 0] = 2


def test_field_mismatch():
    with pytest.raises(ValueError):
        Matrix(F, [[1]]) @ Matrix(GF(7), [[1]])


def test_field_json_roundtrip():
    for f in (F, GF(32003), QQ):
        assert field_from_json(f.to_json()) == f
