"""JSON documents <-> algebras, quivers with potential and dimers."""
from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from adapters.schemas import AlgebraDocument, ArrowDoc, DimerDocument, QPDocument, TermDoc
from algebra.pathalg import AlgebraInputError, Arrow, Path, PathElement, PresentedGradedAlgebra, Quiver
from config.settings import DATA_DIR, EXAMPLE_DOCUMENTS
from constructions.dimer import DimerGraph, Edge
from constructions.qp import Potential


class DocumentError(AlgebraInputError):
    """Malformed document; line and column point into the JSON text when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None, path: str = "") -> None:
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line} column {column}")
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message, {"line": line, "column": column, "path": path})


def _parse(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from exc


def _validate(schema, data: Any):
    try:
        return schema.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        path = "/".join(str(p) for p in first.get("loc", ()))
        raise DocumentError(f"invalid {schema.__name__}: {first.get('msg', 'validation error')}", path=path) from exc


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def read_text(location: str) -> Tuple[str, Optional[str]]:
    """Text of a document path, or of a bundled example given as @name; returns (text, example kind)."""
    kind = None
    if location.startswith("@"):
        name = location[1:]
        if name not in EXAMPLE_DOCUMENTS:
            raise DocumentError(f"unknown example {name!r}; known: {', '.join(sorted(EXAMPLE_DOCUMENTS))}")
        kind, filename = EXAMPLE_DOCUMENTS[name]
        location = os.path.join(DATA_DIR, filename)
    try:
        with open(location, encoding="utf-8") as handle:
            return handle.read(), kind
    except OSError as exc:
        raise DocumentError(f"cannot read {location}: {exc.strerror}") from exc


# -----------------------------
# Quivers and elements
# -----------------------------

def _quiver(vertices: List[str], arrows: List[ArrowDoc]) -> Quiver:
    return Quiver(tuple(vertices), tuple(Arrow(a.name, a.source, a.target, a.degree) for a in arrows))


def _element(quiver: Quiver, terms: List[TermDoc]) -> PathElement:
    acc: Dict[Path, Fraction] = {}
    for term in terms:
        if term.path:
            path = quiver.path(term.path)
        elif term.vertex is not None:
            path = quiver.trivial(term.vertex)
        else:
            raise DocumentError("a term needs a path or a vertex")
        acc[path] = acc.get(path, Fraction(0)) + term.coefficient
    return PathElement.from_mapping(quiver, acc)


def _term_docs(quiver: Quiver, element: PathElement) -> List[Dict[str, Any]]:
    out = []
    for path, coef in sorted(element.as_dict().items()):
        doc: Dict[str, Any] = {"coef": str(coef), "path": quiver.names(path)}
        if path.is_trivial:
            doc["vertex"] = path.source
        out.append(doc)
    return out


def _arrow_docs(quiver: Quiver) -> List[Dict[str, Any]]:
    return [{"name": a.name, "source": a.source, "target": a.target, "degree": a.degree} for a in quiver.arrows]


# -----------------------------
# Algebras
# -----------------------------

def algebra_from_data(data: Any) -> PresentedGradedAlgebra:
    doc = _validate(AlgebraDocument, data)
    quiver = _quiver(doc.vertices, doc.arrows)
    relations = tuple(_element(quiver, rel) for rel in doc.relations)
    return PresentedGradedAlgebra(quiver, relations, doc.name)


def load_algebra(text: str) -> PresentedGradedAlgebra:
    return algebra_from_data(_parse(text))


def algebra_to_data(alg: PresentedGradedAlgebra) -> Dict[str, Any]:
    quiver = alg.quiver
    return {
        "name": alg.name,
        "vertices": list(quiver.vertices),
        "arrows": _arrow_docs(quiver),
        "relations": [_term_docs(quiver, rel) for rel in alg.relations],
    }


def dump_algebra(alg: PresentedGradedAlgebra) -> str:
    return json.dumps(algebra_to_data(alg), indent=2)


# -----------------------------
# Quivers with potential
# -----------------------------

def qp_from_data(data: Any) -> Tuple[Quiver, Potential, Optional[Tuple[str, ...]], str]:
    doc = _validate(QPDocument, data)
    quiver = _quiver(doc.vertices, doc.arrows)
    w = Potential.from_named(quiver, [(t.coefficient, t.cycle) for t in doc.potential])
    cut = tuple(doc.cut) if doc.cut is not None else None
    return quiver, w, cut, doc.name


def load_qp(text: str) -> Tuple[Quiver, Potential, Optional[Tuple[str, ...]], str]:
    return qp_from_data(_parse(text))


def qp_to_data(quiver: Quiver, w: Potential, cut: Optional[Tuple[str, ...]] = None, name: str = "") -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "name": name,
        "vertices": list(quiver.vertices),
        "arrows": _arrow_docs(quiver),
        "potential": [{"coef": str(c), "cycle": names} for c, names in w.named_terms()],
    }
    if cut is not None:
        data["cut"] = list(cut)
    return data


def dump_qp(quiver: Quiver, w: Potential, cut: Optional[Tuple[str, ...]] = None, name: str = "") -> str:
    return json.dumps(qp_to_data(quiver, w, cut, name), indent=2)


# -----------------------------
# Dimers
# -----------------------------

def dimer_from_data(data: Any) -> DimerGraph:
    doc = _validate(DimerDocument, data)
    return DimerGraph(
        tuple(doc.white),
        tuple(doc.black),
        tuple(Edge(e.id, e.white, e.black) for e in doc.edges),
        tuple(tuple(f) for f in doc.faces),
        tuple(doc.face_names or ()),
    )


def load_dimer(text: str) -> DimerGraph:
    return dimer_from_data(_parse(text))


def dimer_to_data(dimer: DimerGraph, name: str = "") -> Dict[str, Any]:
    data = dimer.as_dict()
    data["name"] = name
    return data


def dump_dimer(dimer: DimerGraph, name: str = "") -> str:
    return json.dumps(dimer_to_data(dimer, name), indent=2)


_FROM_DATA = {"algebra": algebra_from_data, "qp": qp_from_data, "dimer": dimer_from_data}


def detect_kind(data: Any) -> str:
    if not isinstance(data, dict):
        raise DocumentError("a document must be a JSON object")
    if "faces" in data:
        return "dimer"
    if "potential" in data:
        return "qp"
    return "algebra"


def load_any(text: str, kind: Optional[str] = None):
    data = _parse(text)
    kind = kind or detect_kind(data)
    if kind not in _FROM_DATA:
        raise DocumentError(f"unknown document kind {kind!r}")
    return _FROM_DATA[kind](data)


def load_location(location: str) -> Tuple[str, Any, Any]:
    """(kind, value, raw JSON data) of a path or @example."""
    text, kind = read_text(location)
    data = _parse(text)
    kind = kind or detect_kind(data)
    return kind, _FROM_DATA[kind](data), data


__all__ = [
    "DocumentError",
    "algebra_from_data",
    "algebra_to_data",
    "canonical_json",
    "detect_kind",
    "dimer_from_data",
    "dimer_to_data",
    "dump_algebra",
    "dump_dimer",
    "dump_qp",
    "load_algebra",
    "load_any",
    "load_dimer",
    "load_location",
    "load_qp",
    "qp_from_data",
    "qp_to_data",
    "read_text",
]
