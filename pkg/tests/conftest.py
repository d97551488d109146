import pytest

from algebra.pathalg import Arrow, PathElement, PresentedGradedAlgebra, Quiver
from repthy.model import build_model


def _path_algebra(vertices, arrows, relations=(), name=""):
    quiver = Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))
    rels = tuple(PathElement.from_named(quiver, [(1, list(r))]) for r in relations)
    return PresentedGradedAlgebra(quiver, rels, name)


@pytest.fixture
def a2_model():
    # 1 -a-> 2
    return build_model(_path_algebra(("1", "2"), [("a", "1", "2")], name="A2"))


@pytest.fixture
def kronecker_model():
    # 1 =a,b=> 2
    return build_model(_path_algebra(("1", "2"), [("a", "1", "2"), ("b", "1", "2")], name="K2"))


@pytest.fixture
def zero_relation_model():
    # 1 -a-> 2 -b-> 3 with ba = 0
    return build_model(_path_algebra(("1", "2", "3"), [("a", "1", "2"), ("b", "2", "3")], [("a", "b")], "A3/rad2"))
