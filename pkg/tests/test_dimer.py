from dataclasses import replace
from fractions import Fraction

import pytest

from adapters.documents import dimer_from_data
from constructions.dimer import (
    DimerError,
    check_matching_hypotheses,
    consistency_charge,
    dimer_from_qp,
    dual_qp,
    first_passing_matching,
    is_perfect_matching,
    matching_to_cut,
    perfect_matchings,
    validate_dimer,
    verify_charge,
)
from constructions.qp import is_cut
from data.examples import load_example_dimer, load_example_qp


@pytest.fixture
def ex1():
    return load_example_dimer("dimer_ex1")


@pytest.fixture
def hexagon():
    return load_example_dimer("dimer_hexagon")


def test_bundled_dimers_are_valid(ex1, hexagon):
    for dimer in (ex1, hexagon, load_example_dimer("dimer_digon")):
        report = validate_dimer(dimer)
        assert report.ok, report.violations
        assert report.euler_characteristic == 0


def test_dual_of_first_example_is_its_quiver_with_potential(ex1):
    quiver, w, _, _ = load_example_qp("qp_ex1")
    assert dual_qp(ex1) == (quiver, w)


def test_flip_reverses_every_arrow(ex1):
    quiver, _ = dual_qp(ex1)
    flipped, w = dual_qp(ex1, flip=True)
    for a, b in zip(quiver.arrows, flipped.arrows):
        assert (a.source, a.target) == (b.target, b.source)
    assert len(w.terms) == 4


def test_hexagon_dual_is_a_single_vertex_with_three_loops(hexagon):
    quiver, w = dual_qp(hexagon)
    assert quiver.vertices == ("0",)
    assert len(quiver.arrows) == 3
    assert sorted(c for c, _ in w.terms) == [-1, 1]


def test_round_trip_through_the_potential(ex1):
    quiver, w = dual_qp(ex1)
    back = dimer_from_qp(quiver, w)
    assert validate_dimer(back).ok
    assert back.face_names == quiver.vertices
    assert dual_qp(back)[1].named_terms() == w.named_terms()


def test_broken_dimers_are_reported(ex1):
    missing_face = replace(ex1, faces=ex1.faces[:-1], face_names=ex1.face_names[:-1])
    report = validate_dimer(missing_face)
    assert not report.ok
    assert any("Euler" in v for v in report.violations)
    with pytest.raises(DimerError):
        dual_qp(missing_face)
    odd = replace(ex1, faces=(("x1", "y1", "z1"),) + ex1.faces[1:])
    assert any("odd length" in v for v in validate_dimer(odd).violations)


def test_perfect_matchings_of_first_example(ex1):
    matchings = perfect_matchings(ex1)
    assert len(matchings) == 8
    assert ("x1", "x2") in matchings
    assert matchings == sorted(matchings)
    assert all(is_perfect_matching(ex1, m) for m in matchings)
    assert not is_perfect_matching(ex1, ["x1", "z1"])
    quiver, w = dual_qp(ex1)
    assert all(is_cut(quiver, w, matching_to_cut(ex1, m)).ok for m in matchings)
    with pytest.raises(DimerError):
        matching_to_cut(ex1, ["x1", "z1"])


def test_hexagon_matchings_are_single_edges(hexagon):
    assert perfect_matchings(hexagon) == [("a",), ("b",), ("c",)]


@pytest.mark.parametrize(
    "name,margin",
    [("dimer_ex1", Fraction(1, 2)), ("dimer_hexagon", Fraction(2, 3))],
)
def test_consistency_charge_found(name, margin):
    dimer = load_example_dimer(name)
    result = consistency_charge(dimer)
    assert result.feasible
    assert result.margin == margin
    assert verify_charge(dimer, result.charge) == []


def test_digon_has_no_consistency_charge():
    result = consistency_charge(load_example_dimer("dimer_digon"))
    assert not result.feasible
    assert result.charge == {}


def test_verify_charge_names_the_failures(ex1):
    charge = {e.id: Fraction(1, 4) for e in ex1.edges}
    failures = verify_charge(ex1, charge)
    assert any(f.startswith("charges around vertex") for f in failures)
    assert any(f.startswith("1 - R around face") for f in failures)
    charge = {e.id: Fraction(1, 2) for e in ex1.edges}
    charge["x1"] = Fraction(0)
    assert "R(x1) = 0 is not positive" in verify_charge(ex1, charge)


@pytest.fixture
def split_hexagon():
    # hexagon edge a subdivided through a bivalent white and a bivalent black vertex
    return dimer_from_data(
        {
            "white": ["W", "W2"],
            "black": ["B", "B2"],
            "edges": [
                {"id": "a1", "white": "W", "black": "B2"},
                {"id": "x", "white": "W2", "black": "B2"},
                {"id": "a2", "white": "W2", "black": "B"},
                {"id": "b", "white": "W", "black": "B"},
                {"id": "c", "white": "W", "black": "B"},
            ],
            "faces": [["a1", "x", "a2", "b", "c", "a2", "x", "a1", "b", "c"]],
        }
    )


def test_charges_above_one_are_consistent(split_hexagon):
    assert validate_dimer(split_hexagon).ok
    result = consistency_charge(split_hexagon)
    assert result.feasible
    assert result.margin == Fraction(2, 3)
    assert result.charge["x"] == Fraction(4, 3)
    assert verify_charge(split_hexagon, result.charge) == []


def test_matching_hypotheses_on_first_example(ex1):
    report = check_matching_hypotheses(ex1, ["x1", "x2"], ["1"])
    assert report.truncated_finite.is_yes
    assert report.truncated_acyclic
    assert report.passed
    assert report.as_dict()["hypotheses"]["A4_orientation"] == "opposite"
    with pytest.raises(DimerError):
        check_matching_hypotheses(ex1, ["x1", "x2"], ["9"])


def test_first_passing_matching(ex1):
    report = first_passing_matching(ex1, ["1"])
    assert report is not None and report.passed
