import random

import pytest

from algebra.pathalg import Arrow, PathElement, PresentedGradedAlgebra, Quiver
from config.settings import DEFAULT_SEED
from constructions.mckay import McKayInput, degree_zero_part_mckay, mckay_algebra, stable_algebra
from data.examples import load_example_algebra
from repthy.homological import (
    SingularCartanError,
    cartan_determinant,
    cartan_matrix,
    coxeter_polynomial,
    ext_dim,
    global_dimension,
    projective_dimension,
    projective_resolution,
)
from repthy.model import build_model, simple_module


def test_hereditary_algebras_have_global_dimension_one(a2_model, kronecker_model):
    assert global_dimension(a2_model).value == 1
    gldim = global_dimension(kronecker_model)
    assert gldim.is_finite
    assert dict(gldim.per_simple) == {"1": 1, "2": 0}


def test_zero_relation_raises_global_dimension(zero_relation_model):
    assert global_dimension(zero_relation_model).value == 2
    res = projective_resolution(simple_module(zero_relation_model, "1"))
    assert res.complete
    assert res.ranks() == [{"1": 1}, {"2": 1}, {"3": 1}]


def test_ext_counts_arrows_and_relations(zero_relation_model):
    s = {v: simple_module(zero_relation_model, v) for v in ("1", "2", "3")}
    assert ext_dim(s["1"], s["2"], 1) == 1
    assert ext_dim(s["2"], s["1"], 1) == 0
    assert ext_dim(s["1"], s["3"], 2) == 1
    assert ext_dim(s["1"], s["1"], 0) == 1
    assert ext_dim(s["1"], s["3"], 1) == 0


def test_self_injective_algebra_has_infinite_global_dimension():
    # two-cycle with all length-two paths zero
    quiver = Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "2", "1")))
    rels = (PathElement.from_named(quiver, [(1, ["a", "b"])]), PathElement.from_named(quiver, [(1, ["b", "a"])]))
    model = build_model(PresentedGradedAlgebra(quiver, rels, "cyclic"))
    assert projective_dimension(simple_module(model, "1"), cap=4) is None
    gldim = global_dimension(model, cap=4)
    assert not gldim.is_finite
    assert gldim.as_dict()["global_dimension"] == ">=4"


def test_cartan_and_coxeter_of_the_kronecker_chain():
    model = build_model(load_example_algebra("kronecker_chain"))
    assert cartan_matrix(model) == [[1, 0, 0], [2, 1, 0], [4, 2, 1]]
    assert cartan_determinant(model) == 1
    assert coxeter_polynomial(model).all_coeffs() == [1, -5, -5, 1]


def test_coxeter_polynomial_of_a2(a2_model):
    assert coxeter_polynomial(a2_model).all_coeffs() == [1, 1, 1]


def test_singular_cartan_matrix_is_refused():
    quiver = Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "2", "1")))
    rels = (
        PathElement.from_named(quiver, [(1, ["a", "b"])]),
        PathElement.from_named(quiver, [(1, ["b", "a"])]),
    )
    model = build_model(PresentedGradedAlgebra(quiver, rels))
    assert cartan_matrix(model) == [[1, 1], [1, 1]]
    with pytest.raises(SingularCartanError):
        coxeter_polynomial(model)


def _stable_mckay_model(n, weights):
    return build_model(stable_algebra(degree_zero_part_mckay(mckay_algebra(McKayInput(n, weights)))))


@pytest.mark.parametrize(
    "model_factory",
    [
        lambda: build_model(load_example_algebra("kronecker_chain")),
        lambda: _stable_mckay_model(5, (1, 2, 2)),
        lambda: _stable_mckay_model(5, (3, 1, 1)),
        lambda: _stable_mckay_model(7, (1, 2, 4)),
    ],
)
def test_coxeter_polynomial_ignores_vertex_order(model_factory):
    model = model_factory()
    rng = random.Random(DEFAULT_SEED)
    expected = coxeter_polynomial(model)
    for _ in range(5):
        order = list(model.vertices)
        rng.shuffle(order)
        assert coxeter_polynomial(model, order) == expected
