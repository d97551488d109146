from fractions import Fraction as F

from algebra.lp import maximize


def test_bounded_problem_reaches_exact_optimum():
    # max x + y  with  x + 2y + s1 = 4,  3x + y + s2 = 6
    result = maximize([1, 1, 0, 0], [[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6])
    assert result.is_optimal
    assert result.value == F(14, 5)
    assert result.x[:2] == [F(8, 5), F(6, 5)]


def test_infeasible_equalities():
    result = maximize([0, 0], [[1, 1], [1, 1]], [1, 2])
    assert result.status == "infeasible"


def test_unbounded_direction():
    result = maximize([1, 0], [[1, -1]], [0])
    assert result.status == "unbounded"


def test_redundant_rows_and_negative_rhs():
    result = maximize([1, 0], [[1, 1], [2, 2], [-1, -1]], [1, 2, -1])
    assert result.is_optimal
    assert result.value == 1
