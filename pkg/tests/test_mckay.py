from math import comb

import pytest

from algebra.normalform import graded_dimension, is_finite_dimensional
from constructions.mckay import (
    McKayInput,
    WeightViolation,
    beilinson_input,
    degree_zero_part_mckay,
    invariant_monomial_count,
    koszul_basis,
    mckay_algebra,
    stable_algebra,
    validate_weights,
)


def test_mckay_algebra_counts():
    b = mckay_algebra(McKayInput(5, (1, 2, 2)))
    assert len(b.vertices) == 5
    assert len(b.quiver.arrows) == 15
    assert len(b.relations) == 15
    assert b.name == "B(5;1,2,2)"
    arrow = b.quiver.arrow("x1_4")
    assert (arrow.source, arrow.target, arrow.degree) == ("4", "0", 1)
    assert b.quiver.arrow("x2_1").degree == 0


def test_stable_degree_zero_part():
    a = degree_zero_part_mckay(mckay_algebra(McKayInput(5, (1, 2, 2))))
    assert all(arrow.degree == 0 for arrow in a.quiver.arrows)
    abar = stable_algebra(a)
    assert abar.vertices == ("1", "2", "3", "4")
    assert len(abar.quiver.arrows) == 7
    assert abar.name == "Abar(5;1,2,2)"


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_two_weight_stable_algebra_is_a_line(n):
    abar = stable_algebra(degree_zero_part_mckay(mckay_algebra(McKayInput(n, (1, n - 1)))))
    assert len(abar.vertices) == n - 1
    assert sorted((a.source, a.target) for a in abar.quiver.arrows) == [(str(i), str(i + 1)) for i in range(1, n - 1)]
    assert abar.relations == ()


def test_beilinson_degree_zero_part():
    a = degree_zero_part_mckay(mckay_algebra(beilinson_input(3)))
    assert len(a.quiver.arrows) == 6
    assert len(a.relations) == 3
    finite = is_finite_dimensional(a)
    # 3 idempotents, 3 + 3 arrows, 6 commuting length-two paths
    assert finite.is_yes and finite.dimension == 3 + 6 + 6


@pytest.mark.parametrize(
    "n,weights,needle",
    [
        (5, (1, 2, 3), "B2"),
        (4, (2, 2), "B1"),
        (5, (0, 5), "B1"),
    ],
)
def test_weight_violations_are_reported(n, weights, needle):
    report = validate_weights(McKayInput(n, weights))
    assert not report.ok
    assert any(v.startswith(needle) for v in report.violations)
    with pytest.raises(WeightViolation):
        mckay_algebra(McKayInput(n, weights))


@pytest.mark.parametrize("n,weights", [(1, (1,)), (5, ())])
def test_degenerate_inputs_raise(n, weights):
    with pytest.raises(WeightViolation):
        validate_weights(McKayInput(n, weights))


@pytest.mark.parametrize("n,weights", [(3, (1, 1, 1)), (5, (1, 2, 2)), (7, (1, 2, 4))])
def test_graded_pieces_match_invariant_monomials(n, weights):
    inp = McKayInput(n, weights)
    b = mckay_algebra(inp)
    for ell in range(3):
        for i in range(n):
            for j in range(n):
                assert graded_dimension(b, ell, (str(j), str(i))) == invariant_monomial_count(inp, i, j, ell)


@pytest.mark.parametrize("n,weights", [(3, (1, 1, 1)), (5, (1, 2, 2)), (4, (1, 1, 1, 1))])
def test_koszul_ranks(n, weights):
    inp = McKayInput(n, weights)
    basis = koszul_basis(inp)
    assert [basis.rank(level) for level in range(inp.d + 1)] == [n * comb(inp.d, level) for level in range(inp.d + 1)]
