"""
Finite-dimensional algebras as explicit structure constants, and their representations.

A left module is a covariant representation: one space per vertex and, for each
arrow a: s -> t, a map M_s -> M_t.  A right module stores, for the same arrow, a
map M_t -> M_s.  Both are handled by the same code through the `side` flag.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from algebra.linalg import Vector, add, columns, entries, extend_to_basis, eye, from_columns, is_zero, matmul, matrix, transpose, zeros
from algebra.normalform import GroebnerBasis, complete_groebner, is_finite_dimensional, normal_words
from algebra.pathalg import AlgebraInputError, Path, PresentedGradedAlgebra, Quiver, compose
from config.logger import logger
from config.settings import DEFAULT_CAP

Element = Dict[int, Fraction]  # basis index -> coefficient

LEFT = "left"
RIGHT = "right"


class ModelRefusal(AlgebraInputError):
    """The algebra is not certified finite-dimensional; payload carries the finiteness status."""


def other_side(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


def _clean(x: Element) -> Element:
    return {k: v for k, v in x.items() if v != 0}


@dataclass(eq=False)
class FiniteAlgebraModel:
    algebra: PresentedGradedAlgebra
    gb: GroebnerBasis
    basis: Tuple[Path, ...]
    index: Dict[Path, int] = field(init=False)
    _products: Dict[Tuple[int, int], Element] = field(init=False, default_factory=dict)

    def __post_init__(self) -> None:
        self.index = {p: k for k, p in enumerate(self.basis)}

    @property
    def quiver(self) -> Quiver:
        return self.algebra.quiver

    @property
    def name(self) -> str:
        return self.algebra.name

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return tuple(v for v in self.quiver.vertices if Path.trivial(v) in self.index)

    def words(self, source: Optional[str] = None, target: Optional[str] = None) -> List[int]:
        return [
            k for k, p in enumerate(self.basis)
            if (source is None or p.source == source) and (target is None or p.target == target)
        ]

    def corner(self, end: str, start: str) -> List[int]:
        """Basis of e_end * L * e_start: normal words from start to end."""
        return self.words(source=start, target=end)

    def trivial(self, vertex: str) -> int:
        return self.index[Path.trivial(vertex)]

    def element_of(self, path: Path) -> Element:
        reduced = self.gb.reduce({path: Fraction(1)})
        return _clean({self.index[p]: c for p, c in reduced.items()})

    def arrow_element(self, name: str) -> Element:
        return self.element_of(self.quiver.path([name]))

    def product(self, i: int, j: int) -> Element:
        """basis[i] * basis[j], with basis[j] applied first."""
        key = (i, j)
        if key not in self._products:
            path = compose(self.basis[i], self.basis[j])
            self._products[key] = {} if path is None else self.element_of(path)
        return self._products[key]

    def mul(self, x: Element, y: Element) -> Element:
        out: Element = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.product(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return _clean(out)

    def follow(self, side: str, x: Element, y: Element) -> Element:
        """x then y, as maps between projectives of the given side."""
        return self.mul(x, y) if side == LEFT else self.mul(y, x)

    def from_vertex(self, side: str, k: int) -> str:
        p = self.basis[k]
        return p.source if side == LEFT else p.target

    def to_vertex(self, side: str, k: int) -> str:
        p = self.basis[k]
        return p.target if side == LEFT else p.source

    def check_associativity(self, rng: random.Random, samples: int) -> List[Tuple[int, int, int]]:
        failures = []
        for _ in range(samples):
            i, j, k = (rng.randrange(self.dimension) for _ in range(3))
            x, y, z = {i: Fraction(1)}, {j: Fraction(1)}, {k: Fraction(1)}
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                failures.append((i, j, k))
        return failures


def build_model(alg: PresentedGradedAlgebra, cap: int = DEFAULT_CAP) -> FiniteAlgebraModel:
    gb = complete_groebner(alg, max(cap, alg.max_relation_length()))
    finiteness = is_finite_dimensional(gb, cap)
    if not finiteness.is_yes:
        raise ModelRefusal(
            f"{alg.name or 'algebra'} is not certified finite-dimensional ({finiteness.status})",
            finiteness.as_dict(),
        )
    basis = tuple(sorted(normal_words(gb)))
    logger.info("Finite model of %s: dimension %d", alg.name or "algebra", len(basis))
    return FiniteAlgebraModel(alg, gb, basis)


# -----------------------------
# Representations
# -----------------------------

@dataclass(eq=False)
class Representation:
    model: FiniteAlgebraModel
    dims: Dict[str, int]
    maps: Dict[str, DomainMatrix] = field(default_factory=dict)
    side: str = LEFT
    name: str = ""

    def __post_init__(self) -> None:
        dims = {v: 0 for v in self.model.quiver.vertices}
        dims.update(self.dims)
        self.dims = dims
        for a in self.model.quiver.arrows:
            frm, to = self.ends(a.name)
            shape = (self.dims[to], self.dims[frm])
            if a.name not in self.maps:
                self.maps[a.name] = zeros(*shape)
            elif self.maps[a.name].shape != shape:
                raise AlgebraInputError(
                    f"map of {a.name} has shape {self.maps[a.name].shape}, expected {shape}",
                    {"arrow": a.name, "side": self.side},
                )

    def ends(self, arrow_name: str) -> Tuple[str, str]:
        """(domain vertex, codomain vertex) of the action of an arrow."""
        a = self.model.quiver.arrow(arrow_name)
        return (a.source, a.target) if self.side == LEFT else (a.target, a.source)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def dimension_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.model.quiver.vertices)

    def act_path(self, path: Path) -> DomainMatrix:
        quiver = self.model.quiver
        if self.side == LEFT:
            out = eye(self.dims[path.source])
            for k in path.arrows:
                out = matmul(self.maps[quiver.arrows[k].name], out)
        else:
            out = eye(self.dims[path.target])
            for k in reversed(path.arrows):
                out = matmul(self.maps[quiver.arrows[k].name], out)
        return out

    def act(self, x: Element, frm: str, to: str) -> DomainMatrix:
        out = zeros(self.dims[to], self.dims[frm])
        for k, c in x.items():
            if self.model.from_vertex(self.side, k) != frm or self.model.to_vertex(self.side, k) != to:
                continue
            out = add(out, _scale(self.act_path(self.model.basis[k]), c))
        return out

    def radical(self) -> Dict[str, List[Vector]]:
        """Spanning vectors of (rad M)_v: images of all arrows into v."""
        spans: Dict[str, List[Vector]] = {v: [] for v in self.dims}
        for a in self.model.quiver.arrows:
            _, to = self.ends(a.name)
            if self.dims[to]:
                spans[to].extend(_columns(self.maps[a.name]))
        return spans

    def top_vectors(self) -> Dict[str, List[Vector]]:
        """Vectors at each vertex whose classes form a basis of M / rad M."""
        rad = self.radical()
        out: Dict[str, List[Vector]] = {}
        for v, n in self.dims.items():
            units = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
            out[v] = [units[k] for k in extend_to_basis(rad[v], units, n)]
        return out

    def top(self) -> Dict[str, int]:
        return {v: len(vs) for v, vs in self.top_vectors().items()}

    def annihilates_relations(self) -> bool:
        for rel in self.model.algebra.relations:
            groups: Dict[Tuple[str, str], DomainMatrix] = {}
            for path, coef in rel.as_dict().items():
                key = (path.source, path.target)
                term = _scale(self.act_path(path), coef)
                groups[key] = add(groups[key], term) if key in groups else term
            if not all(is_zero(m) for m in groups.values()):
                logger.debug("relation %s does not vanish on %s", rel, self.name or "representation")
                return False
        return True

    def dual(self) -> "Representation":
        return Representation(
            self.model,
            dict(self.dims),
            {a: transpose(m) for a, m in self.maps.items()},
            other_side(self.side),
            f"D({self.name})" if self.name else "",
        )

    def direct_sum(self, other: "Representation") -> "Representation":
        if other.side != self.side:
            raise AlgebraInputError("direct sum of modules on different sides", {"sides": [self.side, other.side]})
        dims = {v: self.dims[v] + other.dims[v] for v in self.dims}
        maps = {}
        for a in self.model.quiver.arrows:
            frm, to = self.ends(a.name)
            cols = [c + [Fraction(0)] * other.dims[to] for c in _columns(self.maps[a.name])]
            cols += [[Fraction(0)] * self.dims[to] + c for c in _columns(other.maps[a.name])]
            maps[a.name] = from_columns(cols, dims[to])
        return Representation(self.model, dims, maps, self.side, " + ".join(n for n in (self.name, other.name) if n))


def _scale(m: DomainMatrix, c: Fraction) -> DomainMatrix:
    if 0 in m.shape:
        return m
    return matrix([[c * x for x in row] for row in entries(m)], m.shape)


def _columns(m: DomainMatrix) -> List[Vector]:
    if m.shape[0] == 0:
        return [[] for _ in range(m.shape[1])]
    return columns(m)


# -----------------------------
# Standard modules
# -----------------------------

def simple_module(model: FiniteAlgebraModel, vertex: str, side: str = LEFT) -> Representation:
    return Representation(model, {vertex: 1}, {}, side, f"S{vertex}")


def projective_module(model: FiniteAlgebraModel, vertex: str, side: str = LEFT) -> Representation:
    """L e_v on the left (words from v), e_v L on the right (words into v)."""
    words = [k for k in range(model.dimension) if model.from_vertex(side, k) == vertex]
    at: Dict[str, List[int]] = {v: [] for v in model.quiver.vertices}
    for k in words:
        at[model.to_vertex(side, k)].append(k)
    maps = {}
    for a in model.quiver.arrows:
        frm, to = (a.source, a.target) if side == LEFT else (a.target, a.source)
        arrow = model.arrow_element(a.name)
        position = {k: i for i, k in enumerate(at[to])}
        cols = []
        for w in at[frm]:
            word = {w: Fraction(1)}
            image = model.mul(arrow, word) if side == LEFT else model.mul(word, arrow)
            col = [Fraction(0)] * len(at[to])
            for k, c in image.items():
                col[position[k]] += c
            cols.append(col)
        maps[a.name] = from_columns(cols, len(at[to]))
    return Representation(model, {v: len(ks) for v, ks in at.items()}, maps, side, f"P{vertex}")


def injective_module(model: FiniteAlgebraModel, vertex: str, side: str = LEFT) -> Representation:
    """D(e_v L) on the left, D(L e_v) on the right."""
    rep = projective_module(model, vertex, other_side(side)).dual()
    rep.name = f"I{vertex}"
    return rep


def dual_module(model: FiniteAlgebraModel, side: str = LEFT) -> Representation:
    """D L as a direct sum of the injectives of the given side."""
    if not model.vertices:
        return Representation(model, {}, {}, side, "DL")
    out = direct_sum(injective_module(model, v, side) for v in model.vertices)
    out.name = "DL"
    return out


def from_dict(model: FiniteAlgebraModel, dims: Dict[str, int], maps: Dict[str, Sequence[Sequence[object]]], side: str = LEFT) -> Representation:
    built = {}
    for a in model.quiver.arrows:
        if a.name in maps:
            frm, to = (a.source, a.target) if side == LEFT else (a.target, a.source)
            built[a.name] = matrix(maps[a.name], (dims.get(to, 0), dims.get(frm, 0)))
    return Representation(model, dict(dims), built, side)


def direct_sum(parts: Iterable[Representation]) -> Representation:
    parts = list(parts)
    out = parts[0]
    for part in parts[1:]:
        out = out.direct_sum(part)
    return out
