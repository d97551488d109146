"""
Noncommutative Groebner bases on path algebras.

Words are compared length-lexicographically in application order using the
declared arrow order.  Completion resolves overlap ambiguities shortest first;
work that would exceed the path-length cap is parked and the basis is marked
truncated, never looped on.
"""
from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import sympy

from algebra.pathalg import Path, PathElement, PresentedGradedAlgebra, Quiver, AlgebraInputError
from config.logger import logger
from config.settings import DEFAULT_CAP

Poly = Dict[Path, Fraction]


# -----------------------------
# Basis type
# -----------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    algebra: PresentedGradedAlgebra
    elements: Tuple[PathElement, ...]
    complete: bool
    cap: int
    degree_floor: Optional[int] = None  # least grading degree of parked work
    length_floor: Optional[int] = None  # least path length of parked work
    order: str = field(default="length-lex", compare=False)

    @property
    def status(self) -> str:
        return "complete" if self.complete else f"truncated-at({self.cap})"

    @property
    def quiver(self) -> Quiver:
        return self.algebra.quiver

    @cached_property
    def leading_words(self) -> Tuple[Path, ...]:
        return tuple(el.leading[0] for el in self.elements)

    @cached_property
    def killed_vertices(self) -> frozenset:
        return frozenset(p.source for p in self.leading_words if p.is_trivial)

    @cached_property
    def _rules(self) -> Dict[int, List[Tuple[Tuple[int, ...], int]]]:
        table: Dict[int, List[Tuple[Tuple[int, ...], int]]] = {}
        for k, lw in enumerate(self.leading_words):
            if lw.arrows:
                table.setdefault(lw.arrows[0], []).append((lw.arrows, k))
        return table

    @cached_property
    def max_leading_length(self) -> int:
        return max((p.length for p in self.leading_words), default=0)

    def certifies_grade(self, grade: int) -> bool:
        return self.complete or self.degree_floor is None or grade < self.degree_floor

    def certifies_length(self, length: int) -> bool:
        if self.complete or self.length_floor is None:
            return True
        return self.algebra.is_length_homogeneous() and length < self.length_floor

    def find_factor(self, path: Path) -> Optional[Tuple[int, int]]:
        """(element index, position) of the first leading word occurring in ``path``."""
        if self.killed_vertices:
            quiver = self.quiver
            touched = {path.source} | {quiver.arrows[k].target for k in path.arrows}
            for k, lw in enumerate(self.leading_words):
                if lw.is_trivial and lw.source in touched:
                    return k, -1
        return _find_factor(self._rules, path.arrows)

    def reduce(self, poly: Mapping[Path, Fraction]) -> Poly:
        return _reduce(dict(poly), self.find_factor, self.elements)


def _find_factor(rules: Mapping[int, List[Tuple[Tuple[int, ...], int]]], word: Tuple[int, ...]) -> Optional[Tuple[int, int]]:
    n = len(word)
    for pos in range(n):
        for lw, k in rules.get(word[pos], ()):
            m = len(lw)
            if pos + m <= n and word[pos:pos + m] == lw:
                return k, pos
    return None


def _splice(path: Path, pos: int, width: int, replacement: Path) -> Path:
    arrows = path.arrows[:pos] + replacement.arrows + path.arrows[pos + width:]
    return Path(len(arrows), arrows, path.source, path.target)


def _reduce(work: Poly, finder: Callable[[Path], Optional[Tuple[int, int]]], elements: Sequence[PathElement]) -> Poly:
    result: Poly = {}
    work = {p: c for p, c in work.items() if c != 0}
    while work:
        p = max(work)
        c = work.pop(p)
        hit = finder(p)
        if hit is None:
            result[p] = c
            continue
        k, pos = hit
        if pos < 0:
            continue  # passes through a killed vertex
        lw, _ = elements[k].leading
        for q, d in elements[k].terms[1:]:
            r = _splice(p, pos, lw.length, q)
            value = work.get(r, Fraction(0)) - c * d
            if value == 0:
                work.pop(r, None)
            else:
                work[r] = value
    return result


def _monic(quiver: Quiver, poly: Poly) -> Optional[PathElement]:
    el = PathElement.from_mapping(quiver, poly)
    if el.is_zero():
        return None
    return el.scale(1 / el.leading[1])


# -----------------------------
# Completion
# -----------------------------

class _Completion:
    """Mutable working state of one completion run."""

    def __init__(self, alg: PresentedGradedAlgebra, cap: int) -> None:
        self.alg = alg
        self.quiver = alg.quiver
        self.cap = cap
        self.elements: List[PathElement] = []
        self.active: List[bool] = []
        self.rules: Dict[int, List[Tuple[Tuple[int, ...], int]]] = {}
        self.killed: Dict[str, int] = {}
        self.queue: List[Tuple[int, Tuple[int, ...], int, int, int]] = []
        self.truncated = False
        self.degree_floor: Optional[int] = None
        self.length_floor: Optional[int] = None

    def _park(self, degree: int, length: int) -> None:
        self.truncated = True
        self.degree_floor = degree if self.degree_floor is None else min(self.degree_floor, degree)
        self.length_floor = length if self.length_floor is None else min(self.length_floor, length)

    def _finder(self, path: Path) -> Optional[Tuple[int, int]]:
        if self.killed:
            touched = {path.source} | {self.quiver.arrows[a].target for a in path.arrows}
            for v, k in self.killed.items():
                if v in touched:
                    return k, -1
        return _find_factor(self.rules, path.arrows)

    def reduce(self, poly: Poly) -> Poly:
        return _reduce(poly, self._finder, self.elements)

    def add(self, poly: Poly) -> None:
        el = _monic(self.quiver, self.reduce(poly))
        if el is None:
            return
        lw = el.leading[0]
        if lw.length > self.cap:
            self._park(self.quiver.degree(lw), lw.length)
            logger.debug("parked element with leading word of length %d", lw.length)
            return
        k = len(self.elements)
        self.elements.append(el)
        self.active.append(True)
        # older elements whose leading word now reduces are retired and re-added
        retired = []
        for j in range(k):
            if self.active[j] and self._divides(lw, self.elements[j].leading[0]):
                self.active[j] = False
                retired.append(j)
        self._rebuild_rules()
        for j in range(k + 1):
            if self.active[j]:
                self._queue_overlaps(j, k)
                if j != k:
                    self._queue_overlaps(k, j)
        for j in retired:
            self.add(self.elements[j].as_dict())

    def _divides(self, small: Path, big: Path) -> bool:
        if small.is_trivial:
            touched = {big.source} | {self.quiver.arrows[a].target for a in big.arrows}
            return small.source in touched
        m = small.length
        return any(big.arrows[p:p + m] == small.arrows for p in range(big.length - m + 1))

    def _rebuild_rules(self) -> None:
        self.rules = {}
        self.killed = {}
        for k, el in enumerate(self.elements):
            lw = el.leading[0]
            if not self.active[k]:
                continue
            if lw.arrows:
                self.rules.setdefault(lw.arrows[0], []).append((lw.arrows, k))
            else:
                self.killed[lw.source] = k

    def _queue_overlaps(self, i: int, j: int) -> None:
        """Suffix of lw_i equal to a prefix of lw_j (application order)."""
        u = self.elements[i].leading[0].arrows
        v = self.elements[j].leading[0].arrows
        if not u or not v:
            return
        for o in range(1, min(len(u), len(v))):
            if u[len(u) - o:] == v[:o]:
                word = u + v[o:]
                heapq.heappush(self.queue, (len(word), word, i, j, len(u) - o))

    def _spoly(self, word: Tuple[int, ...], i: int, j: int, shift: int) -> Poly:
        w = self.quiver.path_from_indices(word)
        acc: Poly = {}
        for (k, pos, sign) in ((i, 0, 1), (j, shift, -1)):
            el = self.elements[k]
            lw = el.leading[0]
            for q, d in el.terms:
                r = _splice(w, pos, lw.length, q)
                acc[r] = acc.get(r, Fraction(0)) + sign * d
        return {p: c for p, c in acc.items() if c != 0}

    def run(self) -> None:
        for rel in self.alg.relations:
            self.add(rel.as_dict())
        while self.queue:
            length, word, i, j, shift = heapq.heappop(self.queue)
            if not (self.active[i] and self.active[j]):
                continue
            if length > self.cap:
                self._park(sum(self.quiver.arrows[a].degree for a in word), length)
                continue
            self.add(self._spoly(word, i, j, shift))

    def basis(self) -> Tuple[PathElement, ...]:
        live = [el for k, el in enumerate(self.elements) if self.active[k]]
        live.sort(key=lambda el: el.leading[0])
        # tail reduction gives the reduced basis
        rules: Dict[int, List[Tuple[Tuple[int, ...], int]]] = {}
        for k, el in enumerate(live):
            lw = el.leading[0]
            if lw.arrows:
                rules.setdefault(lw.arrows[0], []).append((lw.arrows, k))
        killed = {el.leading[0].source: k for k, el in enumerate(live) if el.leading[0].is_trivial}

        def finder(path: Path) -> Optional[Tuple[int, int]]:
            if killed:
                touched = {path.source} | {self.quiver.arrows[a].target for a in path.arrows}
                for v, k in killed.items():
                    if v in touched:
                        return k, -1
            return _find_factor(rules, path.arrows)

        reduced = []
        for el in live:
            lw, c = el.leading
            tail = _reduce(dict(el.terms[1:]), finder, live)
            tail[lw] = c
            reduced.append(PathElement.from_mapping(self.quiver, tail))
        return tuple(reduced)


def complete_groebner(alg: PresentedGradedAlgebra, cap: int = DEFAULT_CAP) -> GroebnerBasis:
    if cap < alg.max_relation_length():
        raise AlgebraInputError(
            f"cap {cap} is below the longest relation path ({alg.max_relation_length()})",
            {"cap": cap, "max_relation_length": alg.max_relation_length()},
        )
    return _complete_cached(alg, cap)


@lru_cache(maxsize=128)
def _complete_cached(alg: PresentedGradedAlgebra, cap: int) -> GroebnerBasis:
    logger.info("Groebner completion for %s: %d relations, cap %d", alg.name or "algebra", len(alg.relations), cap)
    state = _Completion(alg, cap)
    state.run()
    elements = state.basis()
    gb = GroebnerBasis(
        algebra=alg,
        elements=elements,
        complete=not state.truncated,
        cap=cap,
        degree_floor=state.degree_floor,
        length_floor=state.length_floor,
    )
    if gb.complete:
        logger.info("Basis complete with %d elements", len(elements))
    else:
        logger.warning("Basis truncated at cap %d (%d elements kept)", cap, len(elements))
    return gb


def normal_form(x: PathElement, gb: GroebnerBasis) -> PathElement:
    return PathElement.from_mapping(gb.quiver, gb.reduce(x.as_dict()))


# -----------------------------
# Normal words
# -----------------------------

State = Tuple[str, Union[str, Tuple[int, ...]]]


@dataclass(frozen=True)
class NormalWordAutomaton:
    """Walks from the vertex states spell exactly the normal words."""
    basis: GroebnerBasis
    graph: nx.DiGraph
    window: int

    @property
    def valid(self) -> bool:
        return self.basis.complete

    def initial_states(self) -> List[State]:
        return [("v", v) for v in self.basis.quiver.vertices if v not in self.basis.killed_vertices]

    def end_vertex(self, state: State) -> str:
        kind, data = state
        if kind == "v":
            return data
        return self.basis.quiver.arrows[data[-1]].target

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.graph)

    def word_count(self) -> int:
        counts: Dict[State, int] = {}
        for s in reversed(list(nx.topological_sort(self.graph))):
            counts[s] = 1 + sum(counts[t] for t in self.graph.successors(s))
        return sum(counts[s] for s in self.initial_states())

    def graded_counts(self, max_grade: int, weight: str = "degree") -> Dict[str, List[Counter]]:
        """For each start vertex j: per grade, a Counter of end vertex -> number of normal words."""
        zero_edges = [(s, t) for s, t, w in self.graph.edges(data=weight) if w == 0]
        zero_graph = nx.DiGraph()
        zero_graph.add_nodes_from(self.graph.nodes)
        zero_graph.add_edges_from(zero_edges)
        if not nx.is_directed_acyclic_graph(zero_graph):
            raise AlgebraInputError("a graded piece is infinite: normal words of weight 0 repeat", {"weight": weight})
        order = list(reversed(list(nx.topological_sort(zero_graph))))
        table: Dict[Tuple[State, int], Counter] = {}
        for grade in range(max_grade + 1):
            for s in order:
                acc = Counter()
                if grade == 0:
                    acc[self.end_vertex(s)] += 1
                for t, data in self.graph[s].items():
                    w = data[weight]
                    if w <= grade:
                        acc.update(table[(t, grade - w)])
                table[(s, grade)] = acc
        return {s[1]: [table[(s, g)] for g in range(max_grade + 1)] for s in self.initial_states()}

    def transfer_matrix_series(self, weight: str = "degree", max_states: int = 60) -> Optional[sympy.Expr]:
        states = list(self.graph.nodes)
        if len(states) > max_states:
            return None
        t = sympy.Symbol("t")
        index = {s: k for k, s in enumerate(states)}
        size = len(states)
        m = sympy.zeros(size, size)
        for s, u, w in self.graph.edges(data=weight):
            m[index[s], index[u]] += t ** w
        ones = sympy.ones(size, 1)
        walks = (sympy.eye(size) - m).LUsolve(ones)
        total = sum((walks[index[s], 0] for s in self.initial_states()), sympy.Integer(0))
        return sympy.factor(sympy.cancel(sympy.together(total)))


def build_automaton(gb: GroebnerBasis) -> NormalWordAutomaton:
    quiver = gb.quiver
    window = max(gb.max_leading_length - 1, 1)
    graph = nx.DiGraph()
    killed = gb.killed_vertices
    frontier: List[State] = [("v", v) for v in quiver.vertices if v not in killed]
    graph.add_nodes_from(frontier)
    seen = set(frontier)
    while frontier:
        state = frontier.pop()
        kind, data = state
        suffix: Tuple[int, ...] = () if kind == "v" else data
        end = data if kind == "v" else quiver.arrows[data[-1]].target
        for b in quiver.outgoing(end):
            arrow = quiver.arrows[b]
            if arrow.target in killed:
                continue
            word = suffix + (b,)
            if _has_leading_suffix(gb, word):
                continue
            nxt: State = ("w", word[-window:])
            graph.add_edge(state, nxt, arrow=b, degree=arrow.degree, length=1)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return NormalWordAutomaton(gb, graph, window)


def _has_leading_suffix(gb: GroebnerBasis, word: Tuple[int, ...]) -> bool:
    for lw in gb.leading_words:
        m = lw.length
        if 0 < m <= len(word) and word[len(word) - m:] == lw.arrows:
            return True
    return False


@lru_cache(maxsize=128)
def automaton_for(gb: GroebnerBasis) -> NormalWordAutomaton:
    return build_automaton(gb)


def normal_words(gb: GroebnerBasis, max_length: Optional[int] = None) -> Iterator[Path]:
    """Depth-first enumeration of normal words, shortest-first per start vertex."""
    quiver = gb.quiver
    for v in quiver.vertices:
        if v in gb.killed_vertices:
            continue
        stack: List[Path] = [Path.trivial(v)]
        while stack:
            p = stack.pop()
            yield p
            if max_length is not None and p.length >= max_length:
                continue
            for b in reversed(quiver.outgoing(p.target)):
                if quiver.arrows[b].target in gb.killed_vertices:
                    continue
                word = p.arrows + (b,)
                if not _has_leading_suffix(gb, word):
                    stack.append(Path(len(word), word, p.source, quiver.arrows[b].target))


def normal_words_upto(gb: GroebnerBasis, bound: int, by: str = "length") -> List[Path]:
    """Normal words of weight <= bound, weight being path length or grading degree."""
    quiver = gb.quiver
    weight = (lambda k: 1) if by == "length" else (lambda k: quiver.arrows[k].degree)
    if by != "length":
        automaton_for(gb).graded_counts(0, weight=by)  # raises on weight-0 cycles
    found: List[Path] = []
    for v in quiver.vertices:
        if v in gb.killed_vertices:
            continue
        stack: List[Tuple[Path, int]] = [(Path.trivial(v), 0)]
        while stack:
            p, w = stack.pop()
            found.append(p)
            for b in quiver.outgoing(p.target):
                nw = w + weight(b)
                if nw > bound or quiver.arrows[b].target in gb.killed_vertices:
                    continue
                word = p.arrows + (b,)
                if not _has_leading_suffix(gb, word):
                    stack.append((Path(len(word), word, p.source, quiver.arrows[b].target), nw))
    found.sort()
    return found


# -----------------------------
# Dimension counts
# -----------------------------

def _basis_for(alg_or_gb: Union[PresentedGradedAlgebra, GroebnerBasis], cap: int) -> GroebnerBasis:
    if isinstance(alg_or_gb, GroebnerBasis):
        return alg_or_gb
    return complete_groebner(alg_or_gb, cap)


def graded_dimension(
    alg: Union[PresentedGradedAlgebra, GroebnerBasis],
    grade: int,
    corner: Optional[Tuple[str, str]] = None,
    cap: int = DEFAULT_CAP,
    by: str = "degree",
) -> Optional[int]:
    """Normal words of the given grade; ``corner=(i, j)`` keeps words from j to i. None means unknown."""
    if grade < 0:
        raise AlgebraInputError("grade must be non-negative", {"grade": grade})
    gb = _basis_for(alg, cap)
    certified = gb.certifies_grade(grade) if by == "degree" else gb.certifies_length(grade)
    if not certified:
        return None
    counts = automaton_for(gb).graded_counts(grade, weight=by)
    if corner is None:
        return sum(sum(per_grade[grade].values()) for per_grade in counts.values())
    end, start = corner
    if start not in counts:
        return 0
    return counts[start][grade][end]


def graded_dimension_table(
    alg: Union[PresentedGradedAlgebra, GroebnerBasis],
    max_grade: int,
    cap: int = DEFAULT_CAP,
    by: str = "degree",
) -> Dict[Tuple[str, str], List[Optional[int]]]:
    """(end, start) -> dims per grade for every vertex pair."""
    gb = _basis_for(alg, cap)
    counts = automaton_for(gb).graded_counts(max_grade, weight=by)
    vertices = gb.quiver.vertices
    table: Dict[Tuple[str, str], List[Optional[int]]] = {}
    for end in vertices:
        for start in vertices:
            row: List[Optional[int]] = []
            for g in range(max_grade + 1):
                ok = gb.certifies_grade(g) if by == "degree" else gb.certifies_length(g)
                row.append(counts[start][g][end] if ok and start in counts else (0 if ok else None))
            table[(end, start)] = row
    return table


@dataclass(frozen=True)
class Finiteness:
    status: str  # "yes" | "no" | "unknown"
    dimension: Optional[int] = None
    cap: Optional[int] = None

    @property
    def is_yes(self) -> bool:
        return self.status == "yes"

    def as_dict(self) -> Dict[str, object]:
        return {"status": self.status, "dimension": self.dimension, "cap": self.cap}


def is_finite_dimensional(alg: Union[PresentedGradedAlgebra, GroebnerBasis], cap: int = DEFAULT_CAP) -> Finiteness:
    gb = _basis_for(alg, cap)
    if not gb.complete:
        return Finiteness("unknown", None, gb.cap)
    automaton = automaton_for(gb)
    if not automaton.is_acyclic():
        return Finiteness("no", None, gb.cap)
    return Finiteness("yes", automaton.word_count(), gb.cap)


@dataclass(frozen=True)
class HilbertSeries:
    dims: Tuple[Optional[int], ...]
    rational: Optional[str] = None
    weight: str = "degree"

    def as_dict(self) -> Dict[str, object]:
        return {"dims": list(self.dims), "rational": self.rational, "weight": self.weight}


def hilbert_series(
    alg: Union[PresentedGradedAlgebra, GroebnerBasis],
    grades: int,
    cap: int = DEFAULT_CAP,
    by: str = "degree",
) -> HilbertSeries:
    gb = _basis_for(alg, cap)
    dims = tuple(graded_dimension(gb, g, None, cap, by) for g in range(grades + 1))
    rational = None
    if gb.complete:
        try:
            expr = automaton_for(gb).transfer_matrix_series(weight=by)
        except (ZeroDivisionError, ValueError) as exc:
            logger.warning("Rational form unavailable: %s", exc)
            expr = None
        rational = None if expr is None else str(expr)
    return HilbertSeries(dims, rational, by)


def corner_series(
    alg: Union[PresentedGradedAlgebra, GroebnerBasis],
    idempotent: Sequence[str],
    grades: int,
    cap: int = DEFAULT_CAP,
) -> List[Optional[int]]:
    """Graded dimensions of e*B*e for e the sum of the given vertex idempotents."""
    table = graded_dimension_table(alg, grades, cap)
    out: List[Optional[int]] = []
    for g in range(grades + 1):
        values = [table[(i, j)][g] for i in idempotent for j in idempotent]
        out.append(None if any(v is None for v in values) else sum(values))
    return out


# -----------------------------
# Row-reduction oracle
# -----------------------------

def _paths_by_length(quiver: Quiver, max_length: int) -> List[List[Path]]:
    layers: List[List[Path]] = [[Path.trivial(v) for v in quiver.vertices]]
    for _ in range(max_length):
        nxt = []
        for p in layers[-1]:
            for b in quiver.outgoing(p.target):
                word = p.arrows + (b,)
                nxt.append(Path(len(word), word, p.source, quiver.arrows[b].target))
        layers.append(nxt)
    return layers


def brute_force_dimension(
    alg: PresentedGradedAlgebra,
    length: int,
    corner: Optional[Tuple[str, str]] = None,
    grade: Optional[int] = None,
) -> int:
    """dim of (paths of this length) / (ideal part of this length), by row reduction.

    Only meaningful for length-homogeneous relations, where the ideal is spanned
    in each length by the multiples p*r*q of that exact length.
    """
    from algebra.linalg import rank_of_rows

    if not alg.is_length_homogeneous():
        raise AlgebraInputError("row-reduction oracle needs length-homogeneous relations")
    quiver = alg.quiver
    layers = _paths_by_length(quiver, length)

    def wanted(p: Path) -> bool:
        if corner is not None and (p.target, p.source) != tuple(corner):
            return False
        return grade is None or quiver.degree(p) == grade

    columns = [p for p in layers[length] if wanted(p)]
    if not columns:
        return 0
    col_index = {p: k for k, p in enumerate(columns)}
    rows: List[Dict[int, Fraction]] = []
    for rel in alg.relations:
        rlen = rel.paths()[0].length
        if rlen > length:
            continue
        rp = rel.paths()[0]
        for left_len in range(length - rlen + 1):
            right_len = length - rlen - left_len
            rights = [q for q in layers[right_len] if q.target == rp.source]
            lefts = [p for p in layers[left_len] if p.source == rp.target]
            for q in rights:
                for p in lefts:
                    row: Dict[int, Fraction] = {}
                    for path, c in rel.terms:
                        full = Path(length, q.arrows + path.arrows + p.arrows, q.source, p.target)
                        if full in col_index:
                            row[col_index[full]] = row.get(col_index[full], Fraction(0)) + c
                    if row:
                        rows.append(row)
    return len(columns) - rank_of_rows(rows, len(columns))
