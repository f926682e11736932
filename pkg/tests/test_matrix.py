import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mbrsec.errors import (
    BadPoints,
    DimensionMismatch,
    FieldTooSmall,
    Inconsistent,
    RepeatedPoint,
    Singular,
    Underdetermined,
)
from mbrsec.field import FieldSpec
from mbrsec.matrix import (
    MatrixFq,
    cauchy_matrix,
    mat_inverse,
    mat_mul,
    mat_rank,
    solve_linear,
    vandermonde_matrix,
)

from oracles import all_square_minors_nonzero, matmul

F13 = FieldSpec(13)

VAND_G = [
    [1, 1, 1, 1, 1],
    [1, 3, 9, 1, 3],
    [1, 5, 12, 8, 1],
    [1, 7, 10, 5, 9],
    [1, 9, 3, 1, 9],
    [1, 11, 4, 5, 3],
]


@pytest.fixture
def vand_g():
    return vandermonde_matrix(F13, [1, 3, 5, 7, 9, 11], 5)


def test_vandermonde_frozen_matrix(vand_g):
    assert vand_g.tolist() == VAND_G
    assert vand_g.row(4) == [1, 9, 3, 1, 9]


def test_vandermonde_edge_cases():
    assert vandermonde_matrix(F13, [0], 4).tolist() == [[1, 0, 0, 0]]
    with pytest.raises(RepeatedPoint):
        vandermonde_matrix(F13, [2, 2], 3)


def test_mat_mul_examples(vand_g):
    x = MatrixFq(F13, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert mat_mul(MatrixFq.identity(F13, 3), x) == x
    v = MatrixFq(F13, [[9, 1, 3]])
    assert mat_mul(v, vand_g.submatrix([0, 1, 4])).tolist() == [[0, 0, 1, 0, 0]]
    with pytest.raises(DimensionMismatch):
        mat_mul(MatrixFq.zeros(F13, 2, 3), MatrixFq.zeros(F13, 2, 2))


def test_mat_mul_agrees_with_naive_product():
    rng = np.random.default_rng(3)
    q = 1048573
    F = FieldSpec(q)
    a = rng.integers(0, q, (4, 7)).tolist()
    b = rng.integers(0, q, (7, 3)).tolist()
    assert mat_mul(MatrixFq(F, a), MatrixFq(F, b)).tolist() == matmul(a, b, q)


def test_rank_examples(vand_g):
    assert mat_rank(MatrixFq.identity(FieldSpec(7), 3)) == 3
    assert mat_rank(vand_g.submatrix([0, 1, 4], [0, 1, 4])) == 2
    assert mat_rank(MatrixFq.zeros(F13, 2, 4)) == 0
    assert mat_rank(MatrixFq.zeros(F13, 0, 0)) == 0


def test_inverse_examples(vand_g):
    i4 = MatrixFq.identity(F13, 4)
    assert mat_inverse(i4) == i4
    c = cauchy_matrix(F13, 3, 3)
    b = mat_inverse(c)
    assert c @ b == MatrixFq.identity(F13, 3)
    assert b @ c == MatrixFq.identity(F13, 3)
    with pytest.raises(Singular):
        mat_inverse(vand_g.submatrix([0, 1, 4], [0, 1, 4]))
    with pytest.raises(DimensionMismatch):
        mat_inverse(MatrixFq.zeros(F13, 2, 3))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 11, 13, 257]))
def test_inverse_round_trip(n, seed, q):
    F = FieldSpec(q)
    a = MatrixFq(F, np.random.default_rng(seed).integers(0, q, (n, n)))
    if mat_rank(a) < n:
        with pytest.raises(Singular):
            mat_inverse(a)
        return
    b = mat_inverse(a)
    assert a @ b == MatrixFq.identity(F, n) == b @ a


def test_solve_linear_examples():
    F = FieldSpec(11)
    b = MatrixFq(F, [[1], [2], [3]])
    assert solve_linear(MatrixFq.identity(F, 3), b) == b
    rng = np.random.default_rng(7)
    while True:
        a = MatrixFq(F, rng.integers(0, 11, (4, 4)))
        if mat_rank(a) == 4:
            break
    x0 = MatrixFq(F, rng.integers(0, 11, (4, 1)))
    assert solve_linear(a, a @ x0) == x0
    singular = MatrixFq(F, [[1, 1], [2, 2]])
    with pytest.raises(Inconsistent):
        solve_linear(singular, MatrixFq(F, [[1], [1]]))
    with pytest.raises(Underdetermined):
        solve_linear(singular, MatrixFq(F, [[1], [2]]))


def test_solve_overdetermined_consistent():
    F = FieldSpec(13)
    g = cauchy_matrix(F, 6, 3)
    x = MatrixFq(F, [[4], [0], [12]])
    assert solve_linear(g, g @ x) == x


def test_cauchy_defaults():
    assert cauchy_matrix(FieldSpec(3), 1, 1).tolist() == [[2]]
    c = cauchy_matrix(F13, 6, 5)
    assert c.shape == (6, 5)
    assert all_square_minors_nonzero(c.tolist(), 13)


@pytest.mark.parametrize("q,m,n", [(7, 3, 4), (11, 5, 6), (13, 6, 6), (17, 6, 6)])
def test_cauchy_every_square_submatrix_invertible(q, m, n):
    assert all_square_minors_nonzero(cauchy_matrix(FieldSpec(q), m, n).tolist(), q)


def test_cauchy_bad_points():
    with pytest.raises(BadPoints):
        cauchy_matrix(F13, 2, 2, xs=[1, 2], ys=[12, 5])
    with pytest.raises(BadPoints):
        cauchy_matrix(F13, 2, 2, xs=[1, 1], ys=[3, 4])
    with pytest.raises(FieldTooSmall):
        cauchy_matrix(FieldSpec(7), 6, 5)


def test_matrices_are_immutable():
    m = MatrixFq(F13, [[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        m.array[0, 0] = 5
    assert m[1, 0].value == 3
    assert m.T.tolist() == [[1, 3], [2, 4]]
    assert len(m.entries) == 4
