from fractions import Fraction as F

import pytest

from algebra import linalg


def test_rank_nullspace_and_solve():
    m = linalg.matrix([[1, 2, 3], [2, 4, 6]])
    assert linalg.rank(m) == 1
    kernel = linalg.nullspace(m)
    assert len(kernel) == 2
    for vec in kernel:
        assert linalg.vector_is_zero(linalg.apply(m, vec))
    sol = linalg.solve(m, [F(1), F(2)])
    assert linalg.apply(m, sol) == [F(1), F(2)]
    assert linalg.solve(m, [F(1), F(1)]) is None


def test_empty_shapes_are_handled():
    empty = linalg.zeros(0, 3)
    assert linalg.rank(empty) == 0
    assert len(linalg.nullspace(empty)) == 3
    assert linalg.apply(linalg.zeros(2, 0), []) == [F(0), F(0)]
    assert linalg.matmul(linalg.zeros(2, 0), linalg.zeros(0, 4)).shape == (2, 4)
    assert linalg.det(linalg.zeros(0, 0)) == 1


def test_block_assembly_and_shape_check():
    one = linalg.eye(1)
    m = linalg.block([[one, None], [None, linalg.neg(one)]], [1, 1], [1, 1])
    assert linalg.entries(m) == [[F(1), F(0)], [F(0), F(-1)]]
    with pytest.raises(ValueError):
        linalg.block([[linalg.eye(2)]], [1], [1])


def test_kron_and_transpose():
    a = linalg.matrix([[1, 2]])
    b = linalg.matrix([[0, 1], [1, 0]])
    k = linalg.kron(a, b)
    assert linalg.entries(k) == [[0, 1, 0, 2], [1, 0, 2, 0]]
    assert linalg.transpose(a).shape == (2, 1)


def test_quotient_space_projects_relations_to_zero():
    q = linalg.QuotientSpace(3, [[F(1), F(-1), F(0)]])
    assert q.size == 2
    assert linalg.vector_is_zero(q.project([F(1), F(-1), F(0)]))
    x = [F(2), F(5), F(7)]
    back = q.lift(q.project(x))
    diff = [u - v for u, v in zip(x, back)]
    # x and its lifted projection differ by a multiple of the relation
    assert diff[0] == -diff[1] and diff[2] == 0


def test_charpoly_and_inverse():
    m = linalg.matrix([[2, 1], [1, 1]])
    assert linalg.charpoly(m) == [F(1), F(-3), F(1)]
    assert linalg.entries(linalg.matmul(m, linalg.inverse(m))) == [[1, 0], [0, 1]]
    assert linalg.det(m) == 1


def test_independent_columns_and_extension():
    vecs = [[F(1), F(0)], [F(2), F(0)], [F(0), F(1)]]
    assert linalg.independent_columns(vecs, 2) == [0, 2]
    assert linalg.extend_to_basis([[F(1), F(1)]], [[F(1), F(0)], [F(0), F(1)]], 2) == [0]
