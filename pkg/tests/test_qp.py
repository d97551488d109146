import pytest

from algebra.normalform import is_finite_dimensional
from algebra.pathalg import AlgebraInputError, PathElement, quotient_by_vertices
from constructions.qp import (
    CutError,
    Potential,
    arrow_derivative_sum,
    check_main_hypotheses,
    cyclic_derivative,
    dimer_bimodule_complex,
    find_cuts,
    is_cut,
    jacobian_algebra,
    rotation_sum,
    truncated_algebra,
)
from data.examples import load_example_qp


@pytest.fixture
def ex1():
    quiver, w, cut, _ = load_example_qp("qp_ex1")
    return quiver, w, cut


@pytest.fixture
def ex2():
    quiver, w, cut, _ = load_example_qp("qp_ex2")
    return quiver, w, cut


def test_potential_is_stored_up_to_rotation(ex1):
    quiver, w, _ = ex1
    rotated = Potential.from_named(quiver, [(1, ["y1", "z1", "w1", "x1"])])
    plain = Potential.from_named(quiver, [(1, ["x1", "y1", "z1", "w1"])])
    assert rotated == plain
    assert len(w.terms) == 4
    with pytest.raises(AlgebraInputError):
        Potential.from_named(quiver, [(1, ["x1", "y1"])])


def test_cyclic_derivative(ex1):
    quiver, w, _ = ex1
    expected = PathElement.from_named(quiver, [(1, ["y1", "z1", "w1"]), (-1, ["y2", "z1", "w2"])])
    assert cyclic_derivative(w, "x1") == expected
    with pytest.raises(AlgebraInputError):
        cyclic_derivative(w, "nope")


def test_euler_identity_holds_exactly(ex1, ex2):
    for _, w, _ in (ex1, ex2):
        assert arrow_derivative_sum(w) == rotation_sum(w)


def test_jacobian_algebras(ex1, ex2):
    q1, w1, cut1 = ex1
    jac1 = jacobian_algebra(q1, w1, cut1)
    assert (len(jac1.vertices), len(jac1.quiver.arrows), len(jac1.relations)) == (4, 8, 8)
    assert {a.name for a in jac1.quiver.arrows if a.degree == 1} == {"x1", "x2"}
    q2, w2, cut2 = ex2
    jac2 = jacobian_algebra(q2, w2, cut2)
    assert (len(jac2.vertices), len(jac2.quiver.arrows), len(jac2.relations)) == (6, 12, 12)


def test_cut_recognition(ex1):
    quiver, w, cut = ex1
    assert is_cut(quiver, w, cut).ok
    check = is_cut(quiver, w, ["x1", "y1"])
    assert not check.ok
    assert check.count in (0, 2)
    with pytest.raises(CutError):
        is_cut(quiver, w, ["zz"])
    with pytest.raises(CutError):
        jacobian_algebra(quiver, w, ["x1"])


def test_find_cuts_enumerates_only_cuts(ex1):
    quiver, w, cut = ex1
    cuts = find_cuts(quiver, w)
    assert tuple(sorted(cut)) in cuts
    assert ("y1", "y2") in cuts
    assert cuts == sorted(cuts)
    assert all(is_cut(quiver, w, c).ok for c in cuts)


def test_truncated_algebra(ex1):
    quiver, w, cut = ex1
    trunc = truncated_algebra(quiver, w, cut)
    assert len(trunc.quiver.arrows) == 6
    assert len(trunc.relations) == 2
    assert trunc.quiver.is_acyclic()
    assert is_finite_dimensional(trunc).is_yes


def test_dimer_bimodule_complex_ranks(ex1):
    quiver, w, cut = ex1
    complex_ = dimer_bimodule_complex(quiver, w, cut)
    assert complex_.ranks() == [4, 8, 8, 4]
    assert complex_.algebra.name == "Jac"


def test_hypotheses_on_first_example(ex1):
    quiver, w, cut = ex1
    b = jacobian_algebra(quiver, w, cut)
    report = check_main_hypotheses(b, ["1"])
    assert report.finite_quotient.status == "yes"
    assert report.finite_quotient.dimension == 11
    assert report.a4_on_algebra is False
    assert report.a4_on_opposite is True
    assert report.orientation == "opposite"
    assert report.sinks == {"1": True}
    assert report.passed
    assert report.as_dict()["passed"] is True


def test_quotient_of_first_example_is_a_kronecker_chain(ex1):
    quiver, w, cut = ex1
    bar = quotient_by_vertices(jacobian_algebra(quiver, w, cut), {"1"})
    assert bar.relations == ()
    assert len(bar.quiver.arrows) == 4
