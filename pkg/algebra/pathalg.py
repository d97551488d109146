"""
Graded path algebras presented by a quiver with relations, over exact rationals.

Composition is right-to-left: in the product ``p * q`` the path ``q`` is applied
first.  A ``Path`` lists its arrows in application order (first-applied first),
which is also the order used by the JSON documents.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

Coefficient = Union[int, Fraction]


class AlgebraInputError(Exception):
    """Raised on malformed quivers, relations or algebra operations with invalid arguments."""
    def __init__(self, message: str, payload: Optional[Dict[str, Any]] = None) -> None:
        self.payload = payload or {}
        super().__init__(message)


# -----------------------------
# Quivers and paths
# -----------------------------

@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str
    degree: int = 0


@dataclass(frozen=True, order=True)
class Path:
    """Composable arrow sequence; field order gives the length-lex monomial order."""
    length: int
    arrows: Tuple[int, ...]
    source: str
    target: str

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls(0, (), vertex, vertex)

    @property
    def is_trivial(self) -> bool:
        return self.length == 0


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraInputError("duplicate vertex ids", {"vertices": list(self.vertices)})
        known = set(self.vertices)
        seen = set()
        for arrow in self.arrows:
            if arrow.name in seen:
                raise AlgebraInputError(f"duplicate arrow name {arrow.name!r}", {"arrow": arrow.name})
            seen.add(arrow.name)
            if arrow.source not in known or arrow.target not in known:
                raise AlgebraInputError(
                    f"arrow {arrow.name!r} refers to an unknown vertex",
                    {"arrow": arrow.name, "source": arrow.source, "target": arrow.target},
                )
            if not isinstance(arrow.degree, int) or arrow.degree < 0:
                raise AlgebraInputError(f"arrow {arrow.name!r} has invalid degree {arrow.degree!r}")

    @cached_property
    def arrow_index(self) -> Dict[str, int]:
        return {a.name: k for k, a in enumerate(self.arrows)}

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def _outgoing(self) -> Dict[str, Tuple[int, ...]]:
        table: Dict[str, List[int]] = {v: [] for v in self.vertices}
        for k, a in enumerate(self.arrows):
            table[a.source].append(k)
        return {v: tuple(ks) for v, ks in table.items()}

    @cached_property
    def _incoming(self) -> Dict[str, Tuple[int, ...]]:
        table: Dict[str, List[int]] = {v: [] for v in self.vertices}
        for k, a in enumerate(self.arrows):
            table[a.target].append(k)
        return {v: tuple(ks) for v, ks in table.items()}

    def outgoing(self, vertex: str) -> Tuple[int, ...]:
        return self._outgoing[vertex]

    def incoming(self, vertex: str) -> Tuple[int, ...]:
        return self._incoming[vertex]

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrows[self.arrow_index[name]]
        except KeyError:
            raise AlgebraInputError(f"unknown arrow {name!r}", {"arrow": name}) from None

    def trivial(self, vertex: str) -> Path:
        if vertex not in self.vertex_index:
            raise AlgebraInputError(f"unknown vertex {vertex!r}", {"vertex": vertex})
        return Path.trivial(vertex)

    def path(self, names: Sequence[str]) -> Path:
        """Path from arrow names in application order."""
        if not names:
            raise AlgebraInputError("a named path needs at least one arrow; use trivial() for e_i")
        missing = [n for n in names if n not in self.arrow_index]
        if missing:
            raise AlgebraInputError(f"unknown arrow {missing[0]!r}", {"arrow": missing[0]})
        idx = tuple(self.arrow_index[n] for n in names)
        return self.path_from_indices(idx)

    def path_from_indices(self, idx: Sequence[int]) -> Path:
        idx = tuple(idx)
        for first, second in zip(idx, idx[1:]):
            if self.arrows[first].target != self.arrows[second].source:
                raise AlgebraInputError(
                    "arrows are not composable",
                    {"first": self.arrows[first].name, "then": self.arrows[second].name},
                )
        return Path(len(idx), idx, self.arrows[idx[0]].source, self.arrows[idx[-1]].target)

    def degree(self, path: Path) -> int:
        return sum(self.arrows[k].degree for k in path.arrows)

    def names(self, path: Path) -> List[str]:
        return [self.arrows[k].name for k in path.arrows]

    def render(self, path: Path) -> str:
        if path.is_trivial:
            return f"e_{path.source}"
        # composition notation: last-applied arrow leftmost
        return "*".join(reversed(self.names(path)))

    def to_digraph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for a in self.arrows:
            graph.add_edge(a.source, a.target, key=a.name, degree=a.degree)
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_digraph())


def compose(p: Path, q: Path) -> Optional[Path]:
    """The path "q then p", or None (the zero marker) when q does not end where p starts."""
    if p.source != q.target:
        return None
    if q.is_trivial:
        return p
    if p.is_trivial:
        return q
    return Path(p.length + q.length, q.arrows + p.arrows, q.source, p.target)


# -----------------------------
# Elements
# -----------------------------

def _canonical(terms: Mapping[Path, Fraction]) -> Tuple[Tuple[Path, Fraction], ...]:
    return tuple(sorted(((p, c) for p, c in terms.items() if c != 0), key=lambda t: t[0], reverse=True))


@dataclass(frozen=True)
class PathElement:
    """Finite rational combination of paths, stored leading path first."""
    quiver: Quiver = field(repr=False, compare=False)
    terms: Tuple[Tuple[Path, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, quiver: Quiver, terms: Mapping[Path, Coefficient]) -> "PathElement":
        return cls(quiver, _canonical({p: Fraction(c) for p, c in terms.items()}))

    @classmethod
    def zero(cls, quiver: Quiver) -> "PathElement":
        return cls(quiver, ())

    @classmethod
    def of_path(cls, quiver: Quiver, path: Path, coef: Coefficient = 1) -> "PathElement":
        return cls.from_mapping(quiver, {path: coef})

    @classmethod
    def from_named(cls, quiver: Quiver, terms: Iterable[Tuple[Coefficient, Sequence[str]]]) -> "PathElement":
        acc: Dict[Path, Fraction] = {}
        for coef, names in terms:
            p = quiver.path(names)
            acc[p] = acc.get(p, Fraction(0)) + Fraction(coef)
        return cls.from_mapping(quiver, acc)

    def as_dict(self) -> Dict[Path, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def leading(self) -> Tuple[Path, Fraction]:
        if not self.terms:
            raise ValueError("zero element has no leading term")
        return self.terms[0]

    def paths(self) -> List[Path]:
        return [p for p, _ in self.terms]

    def _combine(self, other: "PathElement", sign: int) -> "PathElement":
        acc = dict(self.terms)
        for p, c in other.terms:
            acc[p] = acc.get(p, Fraction(0)) + sign * c
        return PathElement(self.quiver, _canonical(acc))

    def __add__(self, other: "PathElement") -> "PathElement":
        return self._combine(other, 1)

    def __sub__(self, other: "PathElement") -> "PathElement":
        return self._combine(other, -1)

    def __neg__(self) -> "PathElement":
        return PathElement(self.quiver, tuple((p, -c) for p, c in self.terms))

    def scale(self, coef: Coefficient) -> "PathElement":
        coef = Fraction(coef)
        if coef == 0:
            return PathElement.zero(self.quiver)
        return PathElement(self.quiver, tuple((p, coef * c) for p, c in self.terms))

    def __mul__(self, other: "PathElement") -> "PathElement":
        return multiply(self, other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PathElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def endpoints(self) -> set:
        return {(p.source, p.target) for p, _ in self.terms}

    def degrees(self) -> set:
        return {self.quiver.degree(p) for p, _ in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for p, c in self.terms:
            word = self.quiver.render(p)
            if c == 1:
                parts.append(f"+ {word}")
            elif c == -1:
                parts.append(f"- {word}")
            elif c < 0:
                parts.append(f"- {-c}*{word}")
            else:
                parts.append(f"+ {c}*{word}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def multiply(x: PathElement, y: PathElement) -> PathElement:
    acc: Dict[Path, Fraction] = {}
    for p, c in x.terms:
        for q, d in y.terms:
            r = compose(p, q)
            if r is not None:
                acc[r] = acc.get(r, Fraction(0)) + c * d
    return PathElement(x.quiver, _canonical(acc))


# -----------------------------
# Presented algebras
# -----------------------------

@dataclass(frozen=True)
class PresentedGradedAlgebra:
    quiver: Quiver
    relations: Tuple[PathElement, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "relations", tuple(self.relations))
        for k, rel in enumerate(self.relations):
            if rel.is_zero():
                raise AlgebraInputError(f"relation {k} is zero", {"relation": k})
            if rel.quiver != self.quiver:
                raise AlgebraInputError(f"relation {k} lives on another quiver", {"relation": k})
            if len(rel.endpoints()) != 1:
                raise AlgebraInputError(
                    f"relation {k} mixes endpoints", {"relation": k, "endpoints": sorted(rel.endpoints())}
                )
            if len(rel.degrees()) != 1:
                raise AlgebraInputError(
                    f"relation {k} is not degree-homogeneous", {"relation": k, "degrees": sorted(rel.degrees())}
                )

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    def max_relation_length(self) -> int:
        return max((p.length for rel in self.relations for p in rel.paths()), default=0)

    def is_length_homogeneous(self) -> bool:
        return all(len({p.length for p in rel.paths()}) == 1 for rel in self.relations)

    def element(self, terms: Iterable[Tuple[Coefficient, Sequence[str]]]) -> PathElement:
        return PathElement.from_named(self.quiver, terms)

    def with_name(self, name: str) -> "PresentedGradedAlgebra":
        return PresentedGradedAlgebra(self.quiver, self.relations, name)


def _translate(element: PathElement, quiver: Quiver, index_map: Mapping[int, int]) -> PathElement:
    """Re-express an element on a sub-quiver; paths using dropped arrows or vertices vanish."""
    acc: Dict[Path, Fraction] = {}
    keep = set(quiver.vertices)
    for p, c in element.terms:
        if p.is_trivial:
            if p.source in keep:
                acc[p] = acc.get(p, Fraction(0)) + c
            continue
        if all(k in index_map for k in p.arrows):
            q = Path(p.length, tuple(index_map[k] for k in p.arrows), p.source, p.target)
            acc[q] = acc.get(q, Fraction(0)) + c
    return PathElement(quiver, _canonical(acc))


def restrict(
    alg: PresentedGradedAlgebra,
    vertices: Iterable[str],
    arrows: Iterable[str],
    relations: Optional[Iterable[PathElement]] = None,
    name: str = "",
) -> PresentedGradedAlgebra:
    """Sub-presentation on the given vertices and arrows; relations are projected and zeros dropped."""
    keep_vertices = set(vertices)
    keep_arrows = set(arrows)
    new_vertices = tuple(v for v in alg.quiver.vertices if v in keep_vertices)
    index_map: Dict[int, int] = {}
    new_arrows: List[Arrow] = []
    for k, a in enumerate(alg.quiver.arrows):
        if a.name in keep_arrows and a.source in keep_vertices and a.target in keep_vertices:
            index_map[k] = len(new_arrows)
            new_arrows.append(a)
    quiver = Quiver(new_vertices, tuple(new_arrows))
    source_relations = alg.relations if relations is None else relations
    projected = [_translate(rel, quiver, index_map) for rel in source_relations]
    return PresentedGradedAlgebra(quiver, tuple(r for r in projected if not r.is_zero()), name)


def quotient_by_vertices(alg: PresentedGradedAlgebra, kill: Iterable[str]) -> PresentedGradedAlgebra:
    kill = set(kill)
    vertices = set(alg.quiver.vertices)
    if not kill:
        raise AlgebraInputError("kill set must be nonempty")
    if not kill <= vertices:
        raise AlgebraInputError("kill set is not a subset of the vertices", {"unknown": sorted(kill - vertices)})
    if kill == vertices:
        raise AlgebraInputError("cannot kill every vertex")
    survivors = [v for v in alg.quiver.vertices if v not in kill]
    label = f"{alg.name}/<{','.join(sorted(kill))}>" if alg.name else ""
    return restrict(alg, survivors, [a.name for a in alg.quiver.arrows], name=label)


def opposite_quiver(quiver: Quiver) -> Quiver:
    return Quiver(quiver.vertices, tuple(Arrow(a.name, a.target, a.source, a.degree) for a in quiver.arrows))


def opposite_path(path: Path) -> Path:
    return Path(path.length, tuple(reversed(path.arrows)), path.target, path.source)


def opposite(alg: PresentedGradedAlgebra) -> PresentedGradedAlgebra:
    quiver = opposite_quiver(alg.quiver)
    relations = tuple(
        PathElement.from_mapping(quiver, {opposite_path(p): c for p, c in rel.terms}) for rel in alg.relations
    )
    return PresentedGradedAlgebra(quiver, relations, f"{alg.name}^op" if alg.name else "")


def regrade(alg: PresentedGradedAlgebra, degrees: Mapping[str, int]) -> PresentedGradedAlgebra:
    """Same presentation with new arrow degrees (missing names get 0)."""
    quiver = Quiver(
        alg.quiver.vertices,
        tuple(Arrow(a.name, a.source, a.target, int(degrees.get(a.name, 0))) for a in alg.quiver.arrows),
    )
    relations = tuple(PathElement(quiver, rel.terms) for rel in alg.relations)
    return PresentedGradedAlgebra(quiver, relations, alg.name)


def grading_by_cut(alg: PresentedGradedAlgebra, cut: Iterable[str]) -> PresentedGradedAlgebra:
    cut = set(cut)
    return regrade(alg, {a.name: int(a.name in cut) for a in alg.quiver.arrows})


def degree_zero_part(alg: PresentedGradedAlgebra, name: str = "") -> PresentedGradedAlgebra:
    """Degree-0 arrows with the relations all of whose paths avoid positive-degree arrows."""
    zero_arrows = [a.name for a in alg.quiver.arrows if a.degree == 0]
    kept = [rel for rel in alg.relations if rel.degrees() == {0}]
    return restrict(alg, alg.quiver.vertices, zero_arrows, kept, name=name)
