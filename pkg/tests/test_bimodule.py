import pytest

from repthy.bimodule import algebra_bimodule, ext_bimodule, preprojective_graded_dims, tensor_over


def test_algebra_as_a_bimodule(kronecker_model):
    base = algebra_bimodule(kronecker_model)
    assert base.dimension == kronecker_model.dimension == 4
    assert base.actions_commute()
    assert base.pair_dims()[("2", "1")] == 2


def test_ext_bimodule_of_a2_is_one_dimensional(a2_model):
    e = ext_bimodule(a2_model, 1)
    assert e.dimension == 1
    assert e.actions_commute()
    assert tensor_over(e, e).dimension == 0


@pytest.mark.parametrize(
    "fixture,totals",
    [("a2_model", (3, 1, 0)), ("kronecker_model", (4, 12, 20))],
)
def test_preprojective_graded_dimensions(request, fixture, totals):
    model = request.getfixturevalue(fixture)
    dims = preprojective_graded_dims(model, 1, 2)
    assert dims.totals == totals
    assert dims.as_dict()["totals"] == list(totals)
