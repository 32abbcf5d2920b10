#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF, Matrix
from sympy import QQ as SYMPY_QQ
from sympy.polys.matrices import DomainMatrix

from exactla import (
    DomainMismatchError,
    EchelonForm,
    InconsistentSystemError,
    InvalidDomainError,
    MalformedScalarError,
    MatrixExact,
    ScalarDomain,
    SingularMatrixError,
    VectorExact,
    ZeroDenominatorError,
    format_scalar,
    inverse,
    kernel_basis,
    parse_scalar,
    rank,
    rref,
    solve,
)

small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def dense_matrices(draw, max_rows: int = 5, max_cols: int = 6):
    n_rows = draw(st.integers(min_value=1, max_value=max_rows))
    n_cols = draw(st.integers(min_value=1, max_value=max_cols))
    return [draw(st.lists(small_ints, min_size=n_cols, max_size=n_cols)) for _ in range(n_rows)]


@pytest.mark.parametrize(
    "spec,expected",
    [
        ("rational", "rational"),
        ("Q", "rational"),
        ("qq", "rational"),
        ("prime:7", "prime:7"),
        ("F5", "prime:5"),
        ("GF11", "prime:11"),
    ],
)
def test_domain_from_spec(spec, expected):
    assert ScalarDomain.from_spec(spec).spec == expected


@pytest.mark.parametrize("spec", ["F4", "prime:1", "Z", "GF", "F2147483648"])
def test_domain_from_spec_refuses(spec):
    with pytest.raises(InvalidDomainError):
        ScalarDomain.from_spec(spec)


def test_domain_scope(qq, f5):
    assert qq.theorem_scope
    assert f5.theorem_scope
    assert not ScalarDomain.prime(3).theorem_scope
    assert not ScalarDomain.prime(2).theorem_scope
    assert str(qq) == "Q"
    assert str(f5) == "F5"


def test_scalar_text(qq, f7):
    assert parse_scalar("-6/4", qq) == Fraction(-3, 2)
    assert format_scalar(Fraction(-3, 2), qq) == "-3/2"
    assert format_scalar(Fraction(4, 2), qq) == "2"
    # 1/2 is 4 mod 7
    assert parse_scalar("1/2", f7) == 4
    assert format_scalar(-1, f7) == "6"

    with pytest.raises(MalformedScalarError):
        parse_scalar("1.5", qq)
    with pytest.raises(MalformedScalarError):
        parse_scalar("+3", qq)
    with pytest.raises(ZeroDenominatorError):
        parse_scalar("3/0", qq)
    with pytest.raises(DomainMismatchError):
        parse_scalar("1/7", f7)


def test_vector_arithmetic(f5):
    v = VectorExact(4, {0: 3, 2: 4}, f5)
    w = VectorExact(4, {0: 2, 3: 1}, f5)

    assert (v + w).items() == [(2, 4), (3, 1)]
    assert (v - v).is_zero()
    assert v.scale(5).is_zero()
    assert v.dot(w) == 1
    assert v.entries == {0: 3, 2: 4}
    assert f5.sub(1, 3) == 3
    with pytest.raises(DomainMismatchError):
        v + VectorExact(3, {}, f5)


def test_matrix_product_and_transpose(qq):
    a = MatrixExact.from_dense([[1, 2], [0, 1]], qq)
    b = MatrixExact.from_dense([[1, -2], [0, 1]], qq)

    assert a @ b == MatrixExact.identity(2, qq)
    assert a.transpose().to_dense() == [[1, 0], [2, 1]]
    assert a.trace() == 2
    assert (a - a).is_zero()
    assert a @ VectorExact.from_dense([1, 1], qq) == VectorExact.from_dense([3, 1], qq)


def test_rref_canonical(qq):
    m = MatrixExact.from_dense([[2, 4, 6], [1, 2, 4], [3, 6, 10]], qq)
    result = rref(m)

    assert result.rank == 2
    assert result.pivot_cols == (0, 2)
    assert result.matrix.to_dense() == [[1, 2, 0], [0, 0, 1]]


def test_kernel_basis_over_prime(f5):
    m = MatrixExact.from_dense([[1, 1, 0], [0, 1, 1]], f5)
    kernel = kernel_basis(m)

    assert len(kernel) == 1
    assert kernel[0].to_dense() == [1, 4, 1]
    assert (m @ kernel[0]).is_zero()


def test_solve_and_inverse(qq):
    m = MatrixExact.from_dense([[2, 1], [1, 1]], qq)
    rhs = MatrixExact.from_dense([[3], [2]], qq)

    assert solve(m, rhs).to_dense() == [[1], [1]]
    assert inverse(m).to_dense() == [[1, -1], [-1, 2]]

    singular = MatrixExact.from_dense([[1, 2], [2, 4]], qq)
    with pytest.raises(SingularMatrixError):
        inverse(singular)
    with pytest.raises(InconsistentSystemError):
        solve(singular, MatrixExact.from_dense([[1], [0]], qq))


def test_duplicate_entries_refused(qq):
    with pytest.raises(ValueError):
        MatrixExact.from_entries(2, 2, [(0, 0, 1), (0, 0, 2)], qq)


FIELDS = ["Q", "F5", "F7", "F101"]


def sympy_domain(domain: ScalarDomain):
    return SYMPY_QQ if domain.p is None else GF(domain.p)


@st.composite
def sparse_matrices(draw, max_rows: int = 8, max_cols: int = 10):
    n_rows = draw(st.integers(min_value=1, max_value=max_rows))
    n_cols = draw(st.integers(min_value=1, max_value=max_cols))
    cells = draw(
        st.sets(
            st.tuples(
                st.integers(min_value=0, max_value=n_rows - 1),
                st.integers(min_value=0, max_value=n_cols - 1),
            ),
            max_size=2 * max(n_rows, n_cols),
        )
    )
    values = [[0] * n_cols for _ in range(n_rows)]
    for i, j in sorted(cells):
        values[i][j] = draw(small_ints)
    return values


@pytest.mark.parametrize("field", FIELDS)
@settings(max_examples=100, deadline=None)
@given(values=sparse_matrices())
def test_rank_and_pivots_match_sympy(field, values):
    domain = ScalarDomain.from_spec(field)
    result = rref(MatrixExact.from_dense(values, domain))
    dm = DomainMatrix.from_list_sympy(len(values), len(values[0]), values)
    _, pivots = dm.convert_to(sympy_domain(domain)).rref()

    assert result.rank == dm.convert_to(sympy_domain(domain)).rank()
    assert result.pivot_cols == tuple(pivots)


@settings(max_examples=100, deadline=None)
@given(dense_matrices())
def test_rref_matches_sympy(values):
    qq = ScalarDomain.rational()
    result = rref(MatrixExact.from_dense(values, qq))
    expected, pivots = Matrix(values).rref()

    assert result.pivot_cols == tuple(pivots)
    dense = [[Fraction(str(x)) for x in expected.row(i)] for i in range(len(pivots))]
    assert result.matrix.to_dense() == dense


@pytest.mark.parametrize("field", FIELDS)
@settings(max_examples=100, deadline=None)
@given(values=sparse_matrices())
def test_kernel_rank_nullity_and_idempotence(field, values):
    domain = ScalarDomain.from_spec(field)
    m = MatrixExact.from_dense(values, domain)
    kernel = kernel_basis(m)
    reduced = rref(m)

    assert len(kernel) + rank(m) == m.n_cols
    assert all((m @ v).is_zero() for v in kernel)
    assert rref(reduced.matrix) == reduced


@settings(max_examples=40, deadline=None)
@given(dense_matrices(max_rows=4, max_cols=4), st.randoms(use_true_random=False))
def test_echelon_form_independent_of_insertion_order(values, rng):
    qq = ScalarDomain.rational()
    rows = [dict(enumerate(row)) for row in values]
    shuffled = list(rows)
    rng.shuffle(shuffled)

    first, second = EchelonForm(len(values[0]), qq), EchelonForm(len(values[0]), qq)
    for row in rows:
        first.add({c: Fraction(v) for c, v in row.items() if v})
    for row in shuffled:
        second.add({c: Fraction(v) for c, v in row.items() if v})

    assert first.to_matrix() == second.to_matrix()


def test_small_worked_examples(qq, f5):
    assert parse_scalar("2/4", qq) == Fraction(1, 2)
    assert parse_scalar("-3", f5) == 2

    m = MatrixExact.from_dense([[1, 2], [2, 4]], qq)
    assert rref(m).pivot_cols == (0,)
    assert [v.to_dense() for v in kernel_basis(m)] == [[-2, 1]]
    assert rank(MatrixExact.from_dense([[1, 2], [2, 4]], f5)) == 1
    assert kernel_basis(MatrixExact.identity(2, qq)) == []
    assert len(kernel_basis(MatrixExact.zero(2, 3, qq))) == 3
