import json

import pytest

from algebra.normalform import complete_groebner, corner_series
from algebra.pathalg import quotient_by_vertices
from checks.cycheck import verify_complex, verify_self_duality
from constructions.dimer import consistency_charge, dual_qp, is_cut, matching_to_cut, perfect_matchings
from constructions.mckay import McKayInput, koszul_complex
from constructions.qp import check_main_hypotheses, dimer_bimodule_complex, jacobian_algebra, truncated_algebra
from data.examples import load_example_dimer, load_example_qp
from repthy.homological import global_dimension
from repthy.model import build_model
from scripts.Dispatcher import run

pytestmark = pytest.mark.slow


def _jacobian(name):
    quiver, w, cut, _ = load_example_qp(name)
    return jacobian_algebra(quiver, w, cut, name=f"Jac({name})")


@pytest.mark.parametrize("n,weights", [(3, (1, 1, 1)), (5, (1, 2, 2))])
def test_koszul_complexes_are_calabi_yau_resolutions(n, weights):
    complex_ = koszul_complex(McKayInput(n, weights))
    report = verify_complex(complex_, complete_groebner(complex_.algebra), degcap=4)
    assert report.square_zero and report.exact and report.consistent
    assert verify_self_duality(complex_, 3).matches


def test_dimer_complex_is_a_calabi_yau_resolution():
    quiver, w, cut, _ = load_example_qp("qp_ex1")
    complex_ = dimer_bimodule_complex(quiver, w, cut)
    report = verify_complex(complex_, complete_groebner(complex_.algebra), degcap=4)
    assert report.passed
    assert verify_self_duality(complex_, 3).matches


@pytest.mark.parametrize(
    "argv",
    [
        ["cycheck", "--source", "qp", "@qp_ex1", "--degcap", "4"],
        ["cycheck", "--source", "dimer", "@dimer_ex1", "--degcap", "4"],
        ["cycheck", "--source", "mckay", "--n", "5", "--weights", "1,2,2", "--degcap", "4"],
    ],
)
def test_cycheck_command_passes(argv):
    code, out, err = run(argv)
    assert code == 0, err
    result = json.loads(out)["result"]
    assert result["complex"]["passed"]
    assert result["self_duality"]["self_dual"]


def test_corner_ring_of_the_first_example():
    # height-one lattice points of the square with corners (+-1, +-1)
    assert corner_series(_jacobian("qp_ex1"), ["1"], 1)[1] == 9


@pytest.mark.parametrize("vertex", ["1", "2", "3", "4", "5", "6"])
def test_second_example_fails_finiteness_for_every_vertex(vertex):
    report = check_main_hypotheses(_jacobian("qp_ex2"), [vertex])
    assert not report.finite_quotient.is_yes
    assert not report.passed


def test_second_example_passes_for_two_vertices():
    b = _jacobian("qp_ex2")
    report = check_main_hypotheses(b, ["1", "2"])
    assert report.passed
    assert quotient_by_vertices(b, {"1", "2"}).quiver.is_acyclic()
    quiver, w, cut, _ = load_example_qp("qp_ex2")
    a = truncated_algebra(quiver, w, cut)
    assert a.quiver.is_acyclic()
    assert (len(a.quiver.arrows), len(a.relations)) == (9, 3)


@pytest.mark.parametrize("name", ["qp_ex1", "qp_ex2"])
def test_truncated_algebras_have_global_dimension_at_most_two(name):
    quiver, w, cut, _ = load_example_qp(name)
    gldim = global_dimension(build_model(truncated_algebra(quiver, w, cut)))
    assert gldim.is_finite and gldim.value <= 2


def test_dimer_pipeline_on_the_first_example():
    dimer = load_example_dimer("dimer_ex1")
    quiver, w = dual_qp(dimer)
    assert (len(quiver.vertices), len(quiver.arrows)) == (4, 8)
    assert sorted(len(cycle) for _, cycle in w.terms) == [4, 4, 4, 4]
    matchings = perfect_matchings(dimer)
    assert matchings
    assert all(is_cut(quiver, w, matching_to_cut(dimer, m)).ok for m in matchings)
    charge = consistency_charge(dimer)
    assert charge.feasible
    assert set(charge.charge.values()) == {charge.margin} and str(charge.margin) == "1/2"


def test_hexagon_charge_is_two_thirds():
    charge = consistency_charge(load_example_dimer("dimer_hexagon"))
    assert charge.feasible
    assert {str(v) for v in charge.charge.values()} == {"2/3"}
