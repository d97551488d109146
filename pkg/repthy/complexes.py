"""
Bounded complexes of projective modules over a finite model.

A map between sums of indecomposable projectives is stored by its entries: the
entry (h, g) is the image of the generator g in the summand h.  On the left a
generator at v is e_v in L e_v and the map is x -> x*entry; on the right it is
x -> entry*x.  Differentials are cohomological, d^k: X^k -> X^{k+1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from algebra.linalg import Vector, apply, block, columns, extend_to_basis, from_columns, neg, nullspace, rank, transpose, zeros
from config.logger import logger
from repthy.model import LEFT, Element, FiniteAlgebraModel, Representation, other_side

Entries = Dict[Tuple[int, int], Element]


# -----------------------------
# Sums of indecomposable projectives
# -----------------------------

@dataclass(eq=False)
class ProjectiveSum:
    model: FiniteAlgebraModel
    side: str
    gens: Tuple[str, ...] = ()
    layout: Dict[str, List[Tuple[int, int]]] = field(init=False)
    positions: Dict[str, Dict[Tuple[int, int], int]] = field(init=False)
    _rep: Optional[Representation] = field(init=False, default=None)

    def __post_init__(self) -> None:
        self.gens = tuple(self.gens)
        model = self.model
        self.layout = {v: [] for v in model.quiver.vertices}
        for g, v in enumerate(self.gens):
            for w in range(model.dimension):
                if model.from_vertex(self.side, w) == v:
                    self.layout[model.to_vertex(self.side, w)].append((g, w))
        self.positions = {u: {key: i for i, key in enumerate(keys)} for u, keys in self.layout.items()}

    def __len__(self) -> int:
        return len(self.gens)

    def dim(self, vertex: str) -> int:
        return len(self.layout[vertex])

    def dims(self) -> Dict[str, int]:
        return {u: len(keys) for u, keys in self.layout.items()}

    def vector(self, vertex: str, parts: Dict[int, Element]) -> Vector:
        vec = [Fraction(0)] * self.dim(vertex)
        pos = self.positions[vertex]
        for g, x in parts.items():
            for w, c in x.items():
                vec[pos[(g, w)]] += c
        return vec

    def split(self, vertex: str, vec: Sequence[Fraction]) -> Dict[int, Element]:
        parts: Dict[int, Element] = {}
        for (g, w), c in zip(self.layout[vertex], vec):
            if c != 0:
                parts.setdefault(g, {})[w] = c
        return parts

    def rep(self) -> Representation:
        if self._rep is None:
            model = self.model
            maps = {}
            for a in model.quiver.arrows:
                frm, to = (a.source, a.target) if self.side == LEFT else (a.target, a.source)
                arrow = model.arrow_element(a.name)
                cols = []
                for g, w in self.layout[frm]:
                    word = {w: Fraction(1)}
                    image = model.mul(arrow, word) if self.side == LEFT else model.mul(word, arrow)
                    cols.append(self.vector(to, {g: image}))
                maps[a.name] = from_columns(cols, self.dim(to))
            self._rep = Representation(model, self.dims(), maps, self.side)
        return self._rep


def map_matrix(src: ProjectiveSum, dst: ProjectiveSum, entries: Entries, vertex: str) -> DomainMatrix:
    """The map src -> dst restricted to one vertex space."""
    model = src.model
    by_source: Dict[int, List[Tuple[int, Element]]] = {}
    for (h, g), x in entries.items():
        by_source.setdefault(g, []).append((h, x))
    cols = []
    for g, w in src.layout[vertex]:
        word = {w: Fraction(1)}
        parts: Dict[int, Element] = {}
        for h, x in by_source.get(g, []):
            image = model.follow(src.side, word, x)
            if image:
                parts[h] = image
        cols.append(dst.vector(vertex, parts))
    return from_columns(cols, dst.dim(vertex))


def hom_matrix(src: ProjectiveSum, target: Representation, images: Dict[int, Vector], vertex: str) -> DomainMatrix:
    """The map src -> target sending generator g to images[g], at one vertex."""
    cols = []
    for g, w in src.layout[vertex]:
        image = images.get(g)
        if image is None or target.dims[vertex] == 0:
            cols.append([Fraction(0)] * target.dims[vertex])
            continue
        path = src.model.basis[w]
        cols.append(apply(target.act_path(path), image))
    return from_columns(cols, target.dims[vertex])


def compose_entries(model: FiniteAlgebraModel, side: str, first: Entries, second: Entries) -> Entries:
    """Entries of `second` after `first`."""
    out: Entries = {}
    for (h, g), x in first.items():
        for (c, h2), y in second.items():
            if h2 != h:
                continue
            z = model.follow(side, x, y)
            acc = out.get((c, g), {})
            for k, v in z.items():
                acc[k] = acc.get(k, 0) + v
            out[(c, g)] = acc
    return {key: {k: v for k, v in x.items() if v != 0} for key, x in out.items() if any(v != 0 for v in x.values())}


# -----------------------------
# Complexes of projectives
# -----------------------------

@dataclass(eq=False)
class ProjComplex:
    model: FiniteAlgebraModel
    side: str
    terms: Dict[int, ProjectiveSum] = field(default_factory=dict)
    diffs: Dict[int, Entries] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.terms = {k: t for k, t in self.terms.items() if len(t)}
        self.diffs = {k: d for k, d in self.diffs.items() if d and k in self.terms and k + 1 in self.terms}

    def degrees(self) -> List[int]:
        return sorted(self.terms)

    def term(self, k: int) -> ProjectiveSum:
        return self.terms.get(k) or ProjectiveSum(self.model, self.side, ())

    def diff(self, k: int) -> Entries:
        return self.diffs.get(k, {})

    def ranks(self) -> Dict[int, int]:
        return {k: len(t) for k, t in sorted(self.terms.items())}

    def vertex_matrix(self, k: int, vertex: str) -> DomainMatrix:
        return map_matrix(self.term(k), self.term(k + 1), self.diff(k), vertex)

    def is_square_zero(self) -> bool:
        return all(
            not compose_entries(self.model, self.side, self.diff(k), self.diff(k + 1))
            for k in self.degrees()
        )

    def homology(self) -> Dict[int, Dict[str, int]]:
        """Degree -> vertex -> dimension of H^k at that vertex; zero degrees omitted."""
        out: Dict[int, Dict[str, int]] = {}
        for k in self.degrees():
            dims = {}
            for v in self.model.quiver.vertices:
                n = self.term(k).dim(v)
                if n == 0:
                    continue
                h = n - rank(self.vertex_matrix(k, v)) - rank(self.vertex_matrix(k - 1, v))
                if h:
                    dims[v] = h
            if dims:
                out[k] = dims
        return out

    def homology_vectors(self) -> Dict[int, Tuple[int, ...]]:
        vertices = self.model.quiver.vertices
        return {k: tuple(d.get(v, 0) for v in vertices) for k, d in self.homology().items()}

    def unit_entry(self) -> Optional[Tuple[int, int, int]]:
        """(degree, target, source) of an entry with an invertible trivial-path part."""
        for k in sorted(self.diffs):
            for (h, g), x in sorted(self.diffs[k].items()):
                v = self.term(k).gens[g]
                if self.term(k + 1).gens[h] == v and x.get(self.model.trivial(v), 0) != 0:
                    return k, h, g
        return None

    def is_minimal(self) -> bool:
        return self.unit_entry() is None

    def shift(self, n: int) -> "ProjComplex":
        """X[n]: the term in degree m is X^{m+n}; differentials keep their entries."""
        sign = -1 if n % 2 else 1
        diffs = {k - n: {key: {w: sign * c for w, c in x.items()} for key, x in d.items()} for k, d in self.diffs.items()}
        return ProjComplex(self.model, self.side, {k - n: t for k, t in self.terms.items()}, diffs)


def stalk(model: FiniteAlgebraModel, side: str = LEFT) -> ProjComplex:
    """The algebra itself, concentrated in degree 0."""
    return ProjComplex(model, side, {0: ProjectiveSum(model, side, model.vertices)})


# -----------------------------
# Complexes of modules
# -----------------------------

@dataclass(eq=False)
class ModuleComplex:
    model: FiniteAlgebraModel
    side: str
    terms: Dict[int, Representation] = field(default_factory=dict)
    diffs: Dict[int, Dict[str, DomainMatrix]] = field(default_factory=dict)

    def degrees(self) -> List[int]:
        return sorted(k for k, t in self.terms.items() if t.total)

    def term(self, k: int) -> Representation:
        if k in self.terms:
            return self.terms[k]
        return Representation(self.model, {}, {}, self.side)

    def vertex_matrix(self, k: int, vertex: str) -> DomainMatrix:
        if k in self.diffs and vertex in self.diffs[k]:
            return self.diffs[k][vertex]
        return zeros(self.term(k + 1).dims[vertex], self.term(k).dims[vertex])


def realize(x: ProjComplex) -> ModuleComplex:
    terms = {k: t.rep() for k, t in x.terms.items()}
    diffs = {k: {v: x.vertex_matrix(k, v) for v in x.model.quiver.vertices} for k in x.diffs}
    return ModuleComplex(x.model, x.side, terms, diffs)


def dual_complex(x: ModuleComplex) -> ModuleComplex:
    """D X: the term in degree k is D(X^{-k})."""
    terms = {-k: t.dual() for k, t in x.terms.items()}
    diffs = {-k - 1: {v: transpose(m) for v, m in d.items()} for k, d in x.diffs.items()}
    return ModuleComplex(x.model, other_side(x.side), terms, diffs)


# -----------------------------
# Projective resolutions of complexes
# -----------------------------

@dataclass(eq=False)
class Resolved:
    """A complex of projectives R with a quasi-isomorphism R -> Y given on generators."""
    complex: ProjComplex
    images: Dict[int, Dict[int, Vector]]
    complete: bool


def _cone_kernel_generators(
    y: ModuleComplex, r1: ProjectiveSum, r2: ProjectiveSum, d_r1: Entries, phi1: Dict[int, Vector], k: int
) -> List[Tuple[str, Vector]]:
    """Generators of ker(cone^k -> cone^{k+1}) modulo the image of dY and the radical."""
    model = y.model
    vertices = model.quiver.vertices
    yk, yk1 = y.term(k), y.term(k + 1)
    kernel: Dict[str, List[Vector]] = {}
    sizes: Dict[str, int] = {}
    for u in vertices:
        blocks = [
            [neg(map_matrix(r1, r2, d_r1, u)), zeros(r2.dim(u), yk.dims[u])],
            [hom_matrix(r1, yk1, phi1, u), y.vertex_matrix(k, u)],
        ]
        m = block(blocks, [r2.dim(u), yk1.dims[u]], [r1.dim(u), yk.dims[u]])
        sizes[u] = r1.dim(u) + yk.dims[u]
        kernel[u] = nullspace(m)
    rep1 = r1.rep()
    spans: Dict[str, List[Vector]] = {u: [] for u in vertices}
    for u in vertices:
        below = y.vertex_matrix(k - 1, u)
        if 0 not in below.shape:
            spans[u].extend([Fraction(0)] * r1.dim(u) + c for c in columns(below))
    for a in model.quiver.arrows:
        frm, to = rep1.ends(a.name)
        if not sizes[to]:
            continue
        for vec in kernel[frm]:
            r_part, y_part = vec[: r1.dim(frm)], vec[r1.dim(frm):]
            spans[to].append(apply(rep1.maps[a.name], r_part) + apply(yk.maps[a.name], y_part))
    found: List[Tuple[str, Vector]] = []
    for u in vertices:
        for idx in extend_to_basis(spans[u], kernel[u], sizes[u]):
            found.append((u, kernel[u][idx]))
    return found


def resolve(y: ModuleComplex, cap: int) -> Resolved:
    """Cover Y by projectives from its top degree down; at most `cap` steps below its bottom degree."""
    model, side = y.model, y.side
    degrees = y.degrees()
    empty = ProjectiveSum(model, side, ())
    if not degrees:
        return Resolved(ProjComplex(model, side), {}, True)
    top, bottom = degrees[-1], degrees[0]
    terms: Dict[int, ProjectiveSum] = {}
    diffs: Dict[int, Entries] = {}
    images: Dict[int, Dict[int, Vector]] = {}
    complete = False
    k = top
    while True:
        r1, r2 = terms.get(k + 1, empty), terms.get(k + 2, empty)
        found = _cone_kernel_generators(y, r1, r2, diffs.get(k + 1, {}), images.get(k + 1, {}), k)
        if not found and k < bottom:
            complete = True
            break
        if k < bottom - cap:
            logger.warning("resolution stopped %d steps below degree %d with kernel left", cap, bottom)
            break
        gens = tuple(u for u, _ in found)
        entries: Entries = {}
        images[k] = {}
        for g, (u, vec) in enumerate(found):
            r_part, y_part = vec[: r1.dim(u)], vec[r1.dim(u):]
            for h, x in r1.split(u, [-c for c in r_part]).items():
                entries[(h, g)] = x
            images[k][g] = list(y_part)
        terms[k] = ProjectiveSum(model, side, gens)
        diffs[k] = entries
        k -= 1
    logger.debug("resolved complex in degrees %s: ranks %s", degrees, {d: len(t) for d, t in sorted(terms.items())})
    return Resolved(ProjComplex(model, side, terms, diffs), images, complete)


def hom_to_algebra(x: ProjComplex) -> ProjComplex:
    """Hom(-, L) on a complex of projectives: degree k goes to -k, each entry reverses direction."""
    side = other_side(x.side)
    terms = {-k: ProjectiveSum(x.model, side, t.gens) for k, t in x.terms.items()}
    diffs = {-k - 1: {(g, h): dict(e) for (h, g), e in d.items()} for k, d in x.diffs.items()}
    return ProjComplex(x.model, side, terms, diffs)


# -----------------------------
# Minimalization
# -----------------------------

def _unit_inverse(model: FiniteAlgebraModel, x: Element, vertex: str) -> Element:
    """Inverse in e_v L e_v of an element whose trivial-path coefficient is nonzero."""
    e = model.trivial(vertex)
    c = x[e]
    nil = {k: -v / c for k, v in x.items() if k != e}
    inv: Element = {e: Fraction(1) / c}
    power: Element = {e: Fraction(1)}
    for _ in range(model.dimension):
        power = model.mul(power, nil)
        if not power:
            break
        for k, v in power.items():
            inv[k] = inv.get(k, 0) + v / c
    return {k: v for k, v in inv.items() if v != 0}


def _drop(gens: Tuple[str, ...], index: int) -> Tuple[Tuple[str, ...], Dict[int, int]]:
    kept = [g for g in range(len(gens)) if g != index]
    return tuple(gens[g] for g in kept), {old: new for new, old in enumerate(kept)}


def minimalize(x: ProjComplex) -> ProjComplex:
    """Split off contractible summands P -> P until no entry has an invertible part."""
    model, side = x.model, x.side
    terms = dict(x.terms)
    diffs = {k: dict(d) for k, d in x.diffs.items()}
    removed = 0
    while True:
        current = ProjComplex(model, side, terms, diffs)
        hit = current.unit_entry()
        if hit is None:
            break
        k, h, g = hit
        d = current.diff(k)
        vertex = current.term(k).gens[g]
        inv = _unit_inverse(model, d[(h, g)], vertex)
        reduced: Entries = {}
        for (c, b), delta in d.items():
            if c == h or b == g:
                continue
            reduced[(c, b)] = dict(delta)
        for (h2, b), beta in d.items():
            if h2 != h or b == g:
                continue
            through = model.follow(side, beta, inv)
            for (c, g2), gamma in d.items():
                if g2 != g or c == h:
                    continue
                corr = model.follow(side, through, gamma)
                acc = reduced.setdefault((c, b), {})
                for w, v in corr.items():
                    acc[w] = acc.get(w, 0) - v
        src_gens, src_map = _drop(current.term(k).gens, g)
        dst_gens, dst_map = _drop(current.term(k + 1).gens, h)
        new_diffs = {j: dict(e) for j, e in current.diffs.items()}
        new_diffs[k] = {
            (dst_map[c], src_map[b]): {w: v for w, v in e.items() if v != 0}
            for (c, b), e in reduced.items() if any(v != 0 for v in e.values())
        }
        if k - 1 in new_diffs:
            new_diffs[k - 1] = {(src_map[t], s): e for (t, s), e in new_diffs[k - 1].items() if t != g}
        if k + 1 in new_diffs:
            new_diffs[k + 1] = {(t, dst_map[s]): e for (t, s), e in new_diffs[k + 1].items() if s != h}
        terms = dict(current.terms)
        terms[k] = ProjectiveSum(model, side, src_gens)
        terms[k + 1] = ProjectiveSum(model, side, dst_gens)
        diffs = new_diffs
        removed += 1
    if removed:
        logger.debug("minimalized: removed %d contractible pairs", removed)
    return ProjComplex(model, side, terms, diffs)
