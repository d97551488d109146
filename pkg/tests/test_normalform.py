import random

import pytest

from algebra.normalform import (
    brute_force_dimension,
    complete_groebner,
    corner_series,
    graded_dimension,
    graded_dimension_table,
    hilbert_series,
    is_finite_dimensional,
    normal_form,
    normal_words,
    normal_words_upto,
)
from algebra.pathalg import AlgebraInputError, Arrow, PathElement, PresentedGradedAlgebra, Quiver
from config.settings import DEFAULT_SEED
from data.examples import load_example_algebra


@pytest.fixture
def commutative_plane():
    quiver = Quiver(("1",), (Arrow("x", "1", "1", 1), Arrow("y", "1", "1", 1)))
    rel = PathElement.from_named(quiver, [(1, ["x", "y"]), (-1, ["y", "x"])])
    return PresentedGradedAlgebra(quiver, (rel,), "k[x,y]")


@pytest.fixture
def truncated_line():
    quiver = Quiver(("1",), (Arrow("x", "1", "1", 1),))
    return PresentedGradedAlgebra(quiver, (PathElement.from_named(quiver, [(1, ["x", "x", "x"])]),), "k[x]/x^3")


def test_kronecker_chain_is_finite_with_eleven_words():
    alg = load_example_algebra("kronecker_chain")
    finite = is_finite_dimensional(alg)
    assert finite.is_yes
    assert finite.dimension == 11
    gb = complete_groebner(alg)
    assert gb.complete and gb.status == "complete"
    assert graded_dimension(gb, 1, by="length") == 4
    assert graded_dimension(gb, 2, corner=("4", "2"), by="length") == 4
    assert graded_dimension(gb, 2, corner=("2", "4"), by="length") == 0
    assert len(list(normal_words(gb))) == 11


def test_truncated_polynomial_ring(truncated_line):
    finite = is_finite_dimensional(truncated_line)
    assert finite.status == "yes" and finite.dimension == 3
    assert [graded_dimension(truncated_line, g) for g in range(4)] == [1, 1, 1, 0]


def test_commutative_plane_is_infinite_with_linear_growth(commutative_plane):
    assert is_finite_dimensional(commutative_plane).status == "no"
    assert hilbert_series(commutative_plane, 4).dims == (1, 2, 3, 4, 5)
    assert corner_series(commutative_plane, ["1"], 3) == [1, 2, 3, 4]
    table = graded_dimension_table(commutative_plane, 2)
    assert table[("1", "1")] == [1, 2, 3]


def test_normal_form_rewrites_to_the_smaller_word(commutative_plane):
    gb = complete_groebner(commutative_plane)
    q = commutative_plane.quiver
    yx = PathElement.from_named(q, [(1, ["y", "x"])])
    xy = PathElement.from_named(q, [(1, ["x", "y"])])
    assert normal_form(yx, gb) == xy
    assert normal_form(normal_form(yx, gb), gb) == normal_form(yx, gb)


def test_normal_words_upto_respects_the_bound(commutative_plane):
    gb = complete_groebner(commutative_plane)
    words = normal_words_upto(gb, 2)
    assert len(words) == 1 + 2 + 3
    assert words == sorted(words)


def test_cap_below_relation_length_is_refused(truncated_line):
    with pytest.raises(AlgebraInputError):
        complete_groebner(truncated_line, 2)
    with pytest.raises(AlgebraInputError):
        graded_dimension(truncated_line, -1)


@pytest.mark.parametrize("length", range(5))
def test_normal_words_agree_with_row_reduction(commutative_plane, length):
    assert graded_dimension(commutative_plane, length, by="length") == brute_force_dimension(commutative_plane, length)


def test_normal_form_is_idempotent_on_random_elements(commutative_plane):
    rng = random.Random(DEFAULT_SEED)
    gb = complete_groebner(commutative_plane)
    q = commutative_plane.quiver
    for _ in range(50):
        terms = []
        for _ in range(rng.randint(1, 4)):
            word = [rng.choice(["x", "y"]) for _ in range(rng.randint(1, 4))]
            terms.append((rng.randint(-3, 3), word))
        x = PathElement.from_named(q, terms)
        once = normal_form(x, gb)
        assert normal_form(once, gb) == once
