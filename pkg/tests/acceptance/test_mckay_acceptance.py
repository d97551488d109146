import pytest

from algebra.normalform import complete_groebner, graded_dimension
from constructions.mckay import (
    McKayInput,
    beilinson_input,
    degree_zero_part_mckay,
    invariant_monomial_count,
    mckay_algebra,
    stable_algebra,
)
from constructions.qp import check_main_hypotheses
from repthy.homological import coxeter_polynomial, global_dimension
from repthy.model import build_model

pytestmark = pytest.mark.slow

MCKAY_INPUTS = [(5, (1, 2, 2)), (5, (3, 1, 1)), (3, (1, 1, 1)), (7, (1, 2, 4))]


def _adjacency(alg):
    return sorted((a.source, a.target) for a in alg.quiver.arrows)


def _abar(n, weights):
    return stable_algebra(degree_zero_part_mckay(mckay_algebra(McKayInput(n, weights))))


def test_five_vertex_presentations():
    b = mckay_algebra(McKayInput(5, (1, 2, 2)))
    assert sum(a.degree for a in b.quiver.arrows) == 5
    a = degree_zero_part_mckay(b)
    assert len(a.quiver.outgoing("0")) == 3
    assert a.quiver.incoming("0") == ()
    assert _adjacency(_abar(5, (1, 2, 2))) == [
        ("1", "2"), ("1", "3"), ("1", "3"), ("2", "3"), ("2", "4"), ("2", "4"), ("3", "4"),
    ]
    assert _adjacency(_abar(5, (3, 1, 1))) == [
        ("1", "2"), ("1", "2"), ("1", "4"), ("2", "3"), ("2", "3"), ("3", "4"), ("3", "4"),
    ]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_beilinson_shape(d):
    a = degree_zero_part_mckay(mckay_algebra(beilinson_input(d)))
    assert a.vertices == tuple(str(i) for i in range(d))
    expected = sorted((str(i), str(i + 1)) for i in range(d - 1) for _ in range(d))
    assert _adjacency(a) == expected


@pytest.mark.parametrize("n", range(2, 7))
def test_two_weight_stable_algebra_is_linear(n):
    abar = _abar(n, (1, n - 1))
    assert _adjacency(abar) == [(str(i), str(i + 1)) for i in range(1, n - 1)]
    assert abar.relations == ()


@pytest.mark.parametrize("n,weights", MCKAY_INPUTS)
def test_lattice_oracle_agreement(n, weights):
    inp = McKayInput(n, weights)
    gb = complete_groebner(mckay_algebra(inp))
    assert gb.complete
    for ell in range(6):
        for i in range(n):
            for j in range(n):
                assert graded_dimension(gb, ell, (str(j), str(i))) == invariant_monomial_count(inp, i, j, ell)


@pytest.mark.parametrize("n,weights", MCKAY_INPUTS)
def test_hypotheses_hold_at_vertex_zero(n, weights):
    report = check_main_hypotheses(mckay_algebra(McKayInput(n, weights)), ["0"])
    assert report.finite_quotient.is_yes
    assert report.a4_on_algebra
    assert report.sources == {"0": True}
    assert report.passed


@pytest.mark.parametrize("n,weights", MCKAY_INPUTS)
def test_stable_algebra_global_dimension_is_bounded(n, weights):
    gldim = global_dimension(build_model(_abar(n, weights)))
    assert gldim.is_finite
    assert gldim.value <= len(weights) - 1


def test_stable_algebra_global_dimension_value():
    assert global_dimension(build_model(_abar(5, (1, 2, 2)))).value == 2


def test_coxeter_polynomials_separate_the_two_weightings():
    first = build_model(_abar(5, (1, 2, 2)))
    second = build_model(_abar(5, (3, 1, 1)))
    p, q = coxeter_polynomial(first), coxeter_polynomial(second)
    assert p.degree() == q.degree() == 4
    assert p.LC() == q.LC() == 1
    assert p != q
    assert coxeter_polynomial(first, ["4", "2", "3", "1"]) == p
    assert coxeter_polynomial(second, ["3", "1", "4", "2"]) == q
