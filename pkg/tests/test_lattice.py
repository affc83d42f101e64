import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from torusquot.lattice import (
    IntMatrix,
    Lattice,
    determinant,
    hermite_normal_form,
    hnf,
    invariant_factors,
    inverse_unimodular,
    is_saturated,
    is_unimodular,
    kernel_lattice,
    saturated_sum,
    _hnf_lattice,
    primitive_generator,
    rank_rational,
    rational_feasibility,
    saturate,
    smith_normal_form,
    xgcd,
)


def matrices(max_rows=4, max_cols=5, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c).map(
                lambda e: IntMatrix(r, c, e)
            )
        )
    )


def test_construction_and_access():
    A = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert A.shape == (2, 3)
    assert A[1, 2] == 6
    assert A.column(1) == (2, 5)
    assert A.T.tolist() == [[1, 4], [2, 5], [3, 6]]
    assert A.select_columns([2, 0]).tolist() == [[3, 1], [6, 4]]
    assert A.scale_columns([1, -1, 1]).row(0) == (1, -2, 3)
    assert IntMatrix.from_columns(A.columns(), 2) == A
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_entries_are_immutable():
    A = IntMatrix.identity(2)
    with pytest.raises(AttributeError):
        A.rows = 3


def test_hnf_small_example():
    H, U = hermite_normal_form(IntMatrix.from_rows([[2, 4], [1, 3]]))
    assert H.tolist() == [[1, 1], [0, 2]]
    assert is_unimodular(U)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_properties(A):
    H, U = hermite_normal_form(A)
    assert U @ A == H
    assert is_unimodular(U)
    # echelon with positive pivots, entries above a pivot reduced
    last = -1
    for i in range(H.rows):
        row = H.row(i)
        if not any(row):
            assert all(not any(H.row(k)) for k in range(i, H.rows))
            break
        p = next(j for j, x in enumerate(row) if x)
        assert p > last and row[p] > 0
        for k in range(i):
            assert 0 <= H[k, p] < row[p]
        last = p
    assert hnf(A) == H


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_matches_sympy(A):
    U, D, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert is_unimodular(U) and is_unimodular(V)
    diag = [D[i, i] for i in range(min(A.shape))]
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0 if a else b == 0
    theirs = sympy_snf(Matrix(A.tolist()), domain=ZZ)
    assert [abs(theirs[i, i]) for i in range(min(A.shape))] == diag
    assert invariant_factors(A) == tuple(diag)


@settings(max_examples=100, deadline=None)
@given(matrices(bound=4))
def test_rank_and_kernel(A):
    assert rank_rational(A) == Matrix(A.tolist()).rank()
    K = kernel_lattice(A)
    assert K.rank == A.cols - rank_rational(A)
    for b in K.basis:
        assert A.apply(b) == (0,) * A.rows
    assert is_saturated(K)


def test_determinant_and_inverse():
    U = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert determinant(U) == 1
    assert inverse_unimodular(U) @ U == IntMatrix.identity(2)
    assert determinant(IntMatrix.from_rows([[1, 2], [3, 4]])) == -2
    assert not is_unimodular(IntMatrix.from_rows([[2, 0], [0, 1]]))


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_xgcd(a, b):
    g, x, y = xgcd(a, b)
    assert a * x + b * y == g >= 0


def test_lattice_helpers():
    L = Lattice(2, ((2, 4),))
    assert not is_saturated(L)
    assert saturate(L).basis == ((1, 2),)
    assert (4, 8) in L and (1, 2) not in L
    assert _hnf_lattice([(2, 4), (0, 1)], 2).basis == ((2, 0), (0, 1))
    assert saturated_sum(L, Lattice(2, ((0, 1),))).basis == ((1, 0), (0, 1))
    assert primitive_generator((6, -9, 3)) == (2, -3, 1)


def test_frozen_small_values():
    A = IntMatrix.from_rows([[-2, 9, 9]])
    assert hnf(A).tolist() == [[2, -9, -9]]
    K = kernel_lattice(A)
    assert K.rank == 2 and is_saturated(K)
    assert all(-2 * v[0] + 9 * v[1] + 9 * v[2] == 0 for v in K.basis)
    assert rational_feasibility(A, [1, 1, 1]) == (9, 1, 1)
    assert rational_feasibility(IntMatrix.from_rows([[1, 1]]), [1, 0]) is None
    assert rational_feasibility(IntMatrix.from_rows([[-1, 1, 0, 0], [0, 0, -1, 1]]), [1] * 4) == (1, 1, 1, 1)
    assert saturated_sum(Lattice(2, ((2, 1),)), Lattice(2, ())).basis == ((2, 1),)


def test_rational_feasibility():
    A = IntMatrix.from_rows([[1, 1, -2]])
    a = rational_feasibility(A, [1, 1, 1])
    assert a is not None and A.apply(a) == (0,) and min(a) >= 1
    # all weights positive: no strictly positive relation
    assert rational_feasibility(IntMatrix.from_rows([[1, 2]]), [1, 1]) is None
    assert rational_feasibility(IntMatrix.from_rows([[1, 2]]), [0, 0]) == (0, 0)
