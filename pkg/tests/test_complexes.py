from fractions import Fraction

from repthy.complexes import (
    ModuleComplex,
    ProjComplex,
    ProjectiveSum,
    dual_complex,
    hom_to_algebra,
    minimalize,
    realize,
    resolve,
    stalk,
)
from repthy.model import LEFT, RIGHT, simple_module


def test_stalk_complex_has_the_algebra_as_homology(a2_model):
    x = stalk(a2_model)
    assert x.is_square_zero()
    assert x.is_minimal()
    assert x.homology_vectors() == {0: (1, 2)}


def test_contractible_summand_is_split_off(a2_model):
    e1 = a2_model.trivial("1")
    x = ProjComplex(
        a2_model,
        LEFT,
        {-1: ProjectiveSum(a2_model, LEFT, ("1",)), 0: ProjectiveSum(a2_model, LEFT, ("1",))},
        {-1: {(0, 0): {e1: Fraction(2)}}},
    )
    assert x.is_square_zero()
    assert x.homology() == {}
    assert x.unit_entry() == (-1, 0, 0)
    assert minimalize(x).degrees() == []


def test_shift_moves_degrees_and_flips_signs(a2_model):
    a = a2_model.index[a2_model.quiver.path(["a"])]
    x = ProjComplex(
        a2_model,
        LEFT,
        {0: ProjectiveSum(a2_model, LEFT, ("2",)), 1: ProjectiveSum(a2_model, LEFT, ("1",))},
        {0: {(0, 0): {a: Fraction(1)}}},
    )
    assert x.is_minimal()
    shifted = x.shift(1)
    assert shifted.degrees() == [-1, 0]
    assert shifted.diff(-1) == {(0, 0): {a: Fraction(-1)}}
    assert shifted.homology_vectors() == {0: (1, 0)}


def test_dual_and_hom_to_algebra_swap_sides(a2_model):
    x = stalk(a2_model)
    dual = dual_complex(realize(x))
    assert dual.side == RIGHT
    assert dual.degrees() == [0]
    assert hom_to_algebra(x).side == RIGHT


def test_resolving_a_simple_module(zero_relation_model):
    y = ModuleComplex(zero_relation_model, LEFT, {0: simple_module(zero_relation_model, "1")})
    resolved = resolve(y, cap=4)
    assert resolved.complete
    assert resolved.complex.ranks() == {-2: 1, -1: 1, 0: 1}
    assert resolved.complex.homology_vectors() == {0: (1, 0, 0)}
