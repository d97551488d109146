from adapters.dot import emit_dot
from data.examples import load_example_qp


def test_dot_lists_vertices_then_arrows():
    quiver, _, _, _ = load_example_qp("qp_ex1")
    text = emit_dot(quiver)
    lines = text.splitlines()
    assert lines[0] == "digraph {"
    assert lines[1:5] == ['  "1";', '  "2";', '  "3";', '  "4";']
    assert lines[5] == '  "1" -> "2" [label="x1:0"];'
    assert lines[-1] == "}"
    assert text.endswith("}\n")
    assert len(lines) == 1 + 4 + 8 + 1


def test_dot_name_is_quoted():
    quiver, _, _, _ = load_example_qp("qp_ex1")
    assert emit_dot(quiver, 'say "hi"').startswith('digraph "say \\"hi\\"" {')
