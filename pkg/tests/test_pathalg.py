from fractions import Fraction

import pytest

from algebra.pathalg import (
    AlgebraInputError,
    Arrow,
    Path,
    PathElement,
    PresentedGradedAlgebra,
    Quiver,
    compose,
    degree_zero_part,
    grading_by_cut,
    opposite,
    quotient_by_vertices,
)


@pytest.fixture
def square():
    # 1 -a-> 2 -b-> 4 and 1 -c-> 3 -d-> 4 with ba = dc
    quiver = Quiver(
        ("1", "2", "3", "4"),
        (Arrow("a", "1", "2"), Arrow("b", "2", "4", 1), Arrow("c", "1", "3"), Arrow("d", "3", "4", 1)),
    )
    rel = PathElement.from_named(quiver, [(1, ["a", "b"]), (-1, ["c", "d"])])
    return PresentedGradedAlgebra(quiver, (rel,), "square")


def test_path_from_names_is_in_application_order(square):
    p = square.quiver.path(["a", "b"])
    assert (p.source, p.target, p.length) == ("1", "4", 2)
    assert square.quiver.names(p) == ["a", "b"]
    assert square.quiver.render(p) == "b*a"
    assert square.quiver.degree(p) == 1


def test_compose_applies_right_factor_first(square):
    q = square.quiver
    a, b = q.path(["a"]), q.path(["b"])
    assert compose(b, a) == q.path(["a", "b"])
    assert compose(a, b) is None
    assert compose(q.trivial("2"), a) == a


def test_multiply_matches_compose(square):
    q = square.quiver
    a = PathElement.of_path(q, q.path(["a"]))
    b = PathElement.of_path(q, q.path(["b"]), 3)
    assert (b * a).as_dict() == {q.path(["a", "b"]): Fraction(3)}
    assert (a * b).is_zero()


def test_element_arithmetic_cancels(square):
    q = square.quiver
    x = PathElement.from_named(q, [(1, ["a"]), (2, ["c"])])
    assert (x - x).is_zero()
    assert (x + x).as_dict()[q.path(["c"])] == 4
    assert str(-PathElement.from_named(q, [(1, ["a"])])) == "-a"


@pytest.mark.parametrize(
    "vertices,arrows",
    [
        (("1", "1"), ()),
        (("1",), (Arrow("a", "1", "2"),)),
        (("1", "2"), (Arrow("a", "1", "2"), Arrow("a", "2", "1"))),
        (("1", "2"), (Arrow("a", "1", "2", -1),)),
    ],
)
def test_invalid_quivers_are_rejected(vertices, arrows):
    with pytest.raises(AlgebraInputError):
        Quiver(vertices, arrows)


def test_non_composable_path_is_rejected(square):
    with pytest.raises(AlgebraInputError):
        square.quiver.path(["a", "d"])
    with pytest.raises(AlgebraInputError):
        square.quiver.path(["zz"])


def test_relations_must_be_homogeneous(square):
    q = square.quiver
    mixed = PathElement.from_named(q, [(1, ["a"]), (1, ["c"])])
    with pytest.raises(AlgebraInputError):
        PresentedGradedAlgebra(q, (mixed,))
    graded = PathElement.from_named(q, [(1, ["a", "b"]), (1, ["a"])])
    with pytest.raises(AlgebraInputError):
        PresentedGradedAlgebra(q, (graded,))


def test_quotient_by_vertices_drops_relations_through_them(square):
    bar = quotient_by_vertices(square, {"4"})
    assert bar.quiver.vertices == ("1", "2", "3")
    assert [a.name for a in bar.quiver.arrows] == ["a", "c"]
    assert bar.relations == ()
    with pytest.raises(AlgebraInputError):
        quotient_by_vertices(square, {"9"})
    with pytest.raises(AlgebraInputError):
        quotient_by_vertices(square, set(square.vertices))


def test_degree_zero_part_and_regrading(square):
    zero = degree_zero_part(square)
    assert [a.name for a in zero.quiver.arrows] == ["a", "c"]
    regraded = grading_by_cut(square, ["a", "c"])
    assert [a.degree for a in regraded.quiver.arrows] == [1, 0, 1, 0]
    assert len(regraded.relations) == 1


def test_opposite_reverses_arrows_and_paths(square):
    op = opposite(square)
    a = op.quiver.arrow("a")
    assert (a.source, a.target) == ("2", "1")
    (rel,) = op.relations
    assert {op.quiver.names(p)[0] for p in rel.paths()} == {"b", "d"}
    assert opposite(op) == square


def test_acyclicity_uses_the_underlying_digraph(square):
    assert square.quiver.is_acyclic()
    loop = Quiver(("1",), (Arrow("x", "1", "1"),))
    assert not loop.is_acyclic()


def test_trivial_path_ordering_comes_first():
    assert Path.trivial("1") < Path(1, (0,), "1", "2")
