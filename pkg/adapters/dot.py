from algebra.pathalg import Quiver


def _quote(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


def emit_dot(quiver: Quiver, name: str = "") -> str:
    """DOT digraph with vertices in quiver order; each edge is labelled name:degree."""
    header = f"digraph {_quote(name)} {{" if name else "digraph {"
    lines = [header]
    for v in quiver.vertices:
        lines.append(f"  {_quote(v)};")
    for a in quiver.arrows:
        lines.append(f"  {_quote(a.source)} -> {_quote(a.target)} [label={_quote(f'{a.name}:{a.degree}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
