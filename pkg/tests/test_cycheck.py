from dataclasses import replace
from fractions import Fraction

import pytest

from algebra.normalform import complete_groebner
from algebra.pathalg import Path
from checks.cycheck import IncompleteBasisError, check_entries, verify_complex, verify_self_duality
from constructions.mckay import McKayInput, koszul_complex


@pytest.fixture(scope="module")
def beilinson_koszul():
    return koszul_complex(McKayInput(3, (1, 1, 1)))


def test_koszul_complex_is_exact(beilinson_koszul):
    gb = complete_groebner(beilinson_koszul.algebra)
    report = verify_complex(beilinson_koszul, gb, degcap=2)
    assert report.square_zero
    assert report.exact
    assert report.consistent
    assert report.passed
    assert report.grading == "length"


def test_sign_flip_breaks_square_zero(beilinson_koszul):
    gb = complete_groebner(beilinson_koszul.algebra)
    (h, g), entry = sorted(beilinson_koszul.differentials[0].items())[0]
    broken = beilinson_koszul.with_entry(1, h, g, {key: -value for key, value in entry.items()})
    report = verify_complex(broken, gb, degcap=2)
    assert not report.square_zero
    assert report.offending is not None
    assert not report.passed


def test_wrong_twist_is_not_homogeneous(beilinson_koszul):
    gb = complete_groebner(beilinson_koszul.algebra)
    terms = [list(term) for term in beilinson_koszul.terms]
    terms[1][0] = replace(terms[1][0], twist=5)
    broken = replace(beilinson_koszul, terms=tuple(tuple(term) for term in terms))
    assert check_entries(beilinson_koszul, gb.quiver, "length") is None
    report = verify_complex(broken, gb, degcap=2)
    assert not report.passed
    assert not report.consistent
    assert "twist" in report.offending["reason"]
    assert terms[1][0].label in (report.offending["from"], report.offending["to"])


def test_entry_outside_the_piece_is_recorded(beilinson_koszul):
    gb = complete_groebner(beilinson_koszul.algebra)
    (h, g), entry = sorted(beilinson_koszul.differentials[0].items())[0]
    source = beilinson_koszul.terms[1][g]
    # a scalar where an arrow belongs
    broken = beilinson_koszul.with_entry(1, h, g, {(Path.trivial(source.left), Path.trivial(source.right)): Fraction(1)})
    report = verify_complex(broken, gb, degcap=2)
    assert not report.passed
    assert not report.consistent
    assert report.offending["level"] == 1
    assert report.offending["reason"] == "entry leaves the graded piece (endpoints)"
    assert report.as_dict()["offending"] == report.offending


def test_truncated_basis_cannot_certify(beilinson_koszul):
    gb = complete_groebner(beilinson_koszul.algebra, 2)
    assert not gb.complete
    with pytest.raises(IncompleteBasisError):
        verify_complex(beilinson_koszul, gb, degcap=3)


def test_koszul_complex_is_self_dual():
    complex_ = koszul_complex(McKayInput(5, (1, 2, 2)))
    assert complex_.ranks() == [5, 15, 15, 5]
    assert verify_self_duality(complex_, 3).matches


def test_truncated_complex_is_not_self_dual():
    complex_ = koszul_complex(McKayInput(5, (1, 2, 2))).truncate(2)
    report = verify_self_duality(complex_, 3)
    assert not report.matches
    assert report.mismatches[0]["reason"] == "length"
