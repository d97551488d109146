import json

import pytest

from adapters.documents import (
    DocumentError,
    algebra_from_data,
    canonical_json,
    detect_kind,
    dump_algebra,
    dump_dimer,
    dump_qp,
    load_algebra,
    load_any,
    load_dimer,
    load_location,
    load_qp,
    read_text,
)
from algebra.pathalg import AlgebraInputError
from constructions.dimer import DimerGraph
from data.examples import example_kind, example_names, load_example_algebra, load_example_dimer, load_example_qp


def test_every_bundled_example_loads():
    for name in example_names():
        kind, value, data = load_location(f"@{name}")
        assert kind == example_kind(name)
        assert detect_kind(data) == kind
        if kind == "dimer":
            assert isinstance(value, DimerGraph)


def test_algebra_document_survives_a_dump():
    alg = load_example_algebra("kronecker_chain")
    again = load_algebra(dump_algebra(alg))
    assert again == alg
    assert again.name == "kronecker_chain"


def test_relations_with_trivial_paths_keep_their_vertex():
    data = {
        "vertices": ["1"],
        "arrows": [{"name": "x", "source": "1", "target": "1"}],
        "relations": [[{"coef": "1", "path": ["x", "x"]}, {"coef": "-1", "vertex": "1"}]],
    }
    alg = algebra_from_data(data)
    dumped = json.loads(dump_algebra(alg))
    trivial = [t for t in dumped["relations"][0] if t["path"] == []]
    assert trivial == [{"coef": "-1", "path": [], "vertex": "1"}]


def test_qp_and_dimer_documents_survive_a_dump():
    quiver, w, cut, name = load_example_qp("qp_ex2")
    assert load_qp(dump_qp(quiver, w, cut, name)) == (quiver, w, cut, name)
    dimer = load_example_dimer("dimer_ex1")
    assert load_dimer(dump_dimer(dimer, "dimer_ex1")) == dimer


def test_malformed_json_reports_line_and_column():
    with pytest.raises(DocumentError) as err:
        load_algebra('{"vertices": ["1",\n]}')
    assert err.value.line == 2
    assert err.value.column == 1
    assert "line 2 column 1" in str(err.value)


@pytest.mark.parametrize(
    "data,path",
    [
        ({"vertices": ["1"], "arrows": [{"name": "a", "source": "1"}]}, "arrows/0/target"),
        ({"vertices": ["1"], "colour": "red"}, "colour"),
        ({"vertices": ["1"], "relations": [[{"coef": "1/0", "vertex": "1"}]]}, "relations/0/0/coef"),
    ],
)
def test_schema_errors_point_at_the_field(data, path):
    with pytest.raises(DocumentError) as err:
        algebra_from_data(data)
    assert err.value.path == path
    assert err.value.payload["path"] == path


def test_semantic_errors_keep_their_type():
    data = {"vertices": ["1"], "arrows": [{"name": "a", "source": "1", "target": "2"}]}
    with pytest.raises(AlgebraInputError):
        algebra_from_data(data)


def test_kind_detection_and_unknown_examples(tmp_path):
    assert detect_kind({"faces": []}) == "dimer"
    assert detect_kind({"potential": []}) == "qp"
    assert detect_kind({"vertices": []}) == "algebra"
    with pytest.raises(DocumentError):
        detect_kind([1, 2])
    with pytest.raises(DocumentError):
        read_text("@no_such_example")
    with pytest.raises(DocumentError):
        read_text(str(tmp_path / "missing.json"))
    with pytest.raises(DocumentError):
        load_any('{"vertices": []}', kind="sheaf")


def test_canonical_json_ignores_key_order():
    assert canonical_json({"b": 1, "a": [1, 2]}) == canonical_json({"a": [1, 2], "b": 1}) == '{"a":[1,2],"b":1}'
