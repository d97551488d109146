"""
Quivers with potential.

A potential term is a cycle stored in application order (first-applied arrow
first), rotated to its lexicographically least form.  The Jacobian algebra is
the quotient by all cyclic derivatives; a cut D grades it by d_D.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from algebra.normalform import Finiteness, complete_groebner, is_finite_dimensional, normal_words
from algebra.pathalg import (
    AlgebraInputError,
    Coefficient,
    Path,
    PathElement,
    PresentedGradedAlgebra,
    Quiver,
    degree_zero_part,
    quotient_by_vertices,
    regrade,
    restrict,
)
from checks.cycheck import BimoduleComplex, Generator, Tensor
from config.logger import logger
from config.settings import DEFAULT_CAP


class CutError(AlgebraInputError):
    pass


Cycle = Tuple[int, ...]


def _rotations(cycle: Cycle) -> List[Cycle]:
    return [cycle[k:] + cycle[:k] for k in range(len(cycle))]


def canonical_rotation(cycle: Cycle) -> Cycle:
    return min(_rotations(cycle))


@dataclass(frozen=True)
class Potential:
    quiver: Quiver = field(repr=False)
    terms: Tuple[Tuple[Fraction, Cycle], ...] = ()

    def __post_init__(self) -> None:
        acc: Dict[Cycle, Fraction] = {}
        for coef, cycle in self.terms:
            cycle = tuple(cycle)
            if not cycle:
                raise AlgebraInputError("potential term must contain at least one arrow")
            self.quiver.path_from_indices(cycle)  # composability
            first, last = self.quiver.arrows[cycle[0]], self.quiver.arrows[cycle[-1]]
            if last.target != first.source:
                raise AlgebraInputError(
                    "potential term is not a cycle", {"term": [self.quiver.arrows[k].name for k in cycle]}
                )
            key = canonical_rotation(cycle)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(coef)
        object.__setattr__(self, "terms", tuple(sorted(((c, k) for k, c in acc.items() if c != 0), key=lambda t: t[1])))

    @classmethod
    def from_named(cls, quiver: Quiver, terms: Iterable[Tuple[Coefficient, Sequence[str]]]) -> "Potential":
        return cls(quiver, tuple((Fraction(c), quiver.path(names).arrows) for c, names in terms))

    def named_terms(self) -> List[Tuple[Fraction, List[str]]]:
        return [(c, [self.quiver.arrows[k].name for k in cycle]) for c, cycle in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " ".join(
            f"{'+' if c > 0 else '-'} {'' if abs(c) == 1 else f'{abs(c)}*'}{self.quiver.render(self.quiver.path_from_indices(cyc))}"
            for c, cyc in self.terms
        ).lstrip("+ ")


# -----------------------------
# Derivatives and the Jacobian algebra
# -----------------------------

def _occurrence_splits(cycle: Cycle, arrow: int) -> Iterable[Cycle]:
    """For each occurrence of arrow, the remaining arrows after rotating it to the front."""
    for pos, k in enumerate(cycle):
        if k == arrow:
            yield cycle[pos + 1:] + cycle[:pos]


def cyclic_derivative(w: Potential, arrow_name: str) -> PathElement:
    quiver = w.quiver
    a = quiver.arrow_index.get(arrow_name)
    if a is None:
        raise AlgebraInputError(f"unknown arrow {arrow_name!r}", {"arrow": arrow_name})
    arrow = quiver.arrows[a]
    acc: Dict[Path, Fraction] = {}
    for coef, cycle in w.terms:
        for rest in _occurrence_splits(cycle, a):
            p = quiver.path_from_indices(rest) if rest else Path.trivial(arrow.target)
            acc[p] = acc.get(p, Fraction(0)) + coef
    return PathElement.from_mapping(quiver, acc)


def rotation_sum(w: Potential) -> PathElement:
    """Sum over terms of all rotations, as closed paths."""
    acc: Dict[Path, Fraction] = {}
    for coef, cycle in w.terms:
        for rot in _rotations(cycle):
            p = w.quiver.path_from_indices(rot)
            acc[p] = acc.get(p, Fraction(0)) + coef
    return PathElement.from_mapping(w.quiver, acc)


def arrow_derivative_sum(w: Potential) -> PathElement:
    """Sum over arrows a of a * d_a W; equals rotation_sum exactly."""
    total = PathElement.zero(w.quiver)
    for arrow in w.quiver.arrows:
        total = total + PathElement.of_path(w.quiver, w.quiver.path([arrow.name])) * cyclic_derivative(w, arrow.name)
    return total


def jacobian_algebra(quiver: Quiver, w: Potential, cut: Optional[Iterable[str]] = None, name: str = "") -> PresentedGradedAlgebra:
    cut_set = set(cut) if cut is not None else set()
    if cut is not None:
        check = is_cut(quiver, w, cut_set)
        if not check.ok:
            raise CutError("not a cut of the potential", check.as_dict())
    degrees = {a.name: int(a.name in cut_set) for a in quiver.arrows}
    graded = regrade(PresentedGradedAlgebra(quiver, ()), degrees).quiver
    w = Potential(graded, w.terms)
    relations = []
    for arrow in graded.arrows:
        rel = cyclic_derivative(w, arrow.name)
        if not rel.is_zero():
            relations.append(rel)
    return PresentedGradedAlgebra(graded, tuple(relations), name or "Jac")


# -----------------------------
# Cuts
# -----------------------------

@dataclass(frozen=True)
class CutCheck:
    ok: bool
    offending: Optional[List[str]] = None
    count: int = 0

    def as_dict(self) -> Dict[str, object]:
        return {"is_cut": self.ok, "offending_term": self.offending, "cut_arrows_in_term": self.count}


def is_cut(quiver: Quiver, w: Potential, cut: Iterable[str]) -> CutCheck:
    cut_set = set(cut)
    unknown = cut_set - set(quiver.arrow_index)
    if unknown:
        raise CutError("cut names unknown arrows", {"unknown": sorted(unknown)})
    for _, cycle in w.terms:
        names = [quiver.arrows[k].name for k in cycle]
        count = sum(1 for n in names if n in cut_set)
        if count != 1:
            return CutCheck(False, names, count)
    return CutCheck(True)


def find_cuts(quiver: Quiver, w: Potential) -> List[Tuple[str, ...]]:
    """All arrow subsets meeting every term exactly once (with multiplicity), sorted."""
    terms = [cycle for _, cycle in w.terms]
    in_terms: Dict[int, List[Tuple[int, int]]] = {}
    for t, cycle in enumerate(terms):
        for k in set(cycle):
            in_terms.setdefault(k, []).append((t, cycle.count(k)))
    last_seen = {t: max(cycle) for t, cycle in enumerate(terms)}
    counts = [0] * len(terms)
    chosen: List[int] = []
    found: List[Tuple[str, ...]] = []

    def search(k: int) -> None:
        if k == len(quiver.arrows):
            if all(c == 1 for c in counts):
                found.append(tuple(sorted(quiver.arrows[x].name for x in chosen)))
            return
        for take in (False, True):
            touched = in_terms.get(k, []) if take else []
            if any(counts[t] + m > 1 for t, m in touched):
                continue
            for t, m in touched:
                counts[t] += m
            if take:
                chosen.append(k)
            if all(counts[t] == 1 for t, _ in in_terms.get(k, []) if last_seen[t] == k):
                search(k + 1)
            if take:
                chosen.pop()
            for t, m in touched:
                counts[t] -= m

    search(0)
    return sorted(found)


def truncated_algebra(quiver: Quiver, w: Potential, cut: Iterable[str], name: str = "") -> PresentedGradedAlgebra:
    """Quiver Q - D with the relations d_a W for a in D."""
    cut_set = set(cut)
    check = is_cut(quiver, w, cut_set)
    if not check.ok:
        raise CutError("not a cut of the potential", check.as_dict())
    jac = jacobian_algebra(quiver, w, cut_set)
    derivatives = [cyclic_derivative(Potential(jac.quiver, w.terms), a) for a in sorted(cut_set, key=quiver.arrow_index.get)]
    keep = [a.name for a in quiver.arrows if a.name not in cut_set]
    return restrict(jac, quiver.vertices, keep, [d for d in derivatives if not d.is_zero()], name=name or "Jac_0")


# -----------------------------
# Bimodule resolution
# -----------------------------

def dimer_bimodule_complex(quiver: Quiver, w: Potential, cut: Iterable[str]) -> BimoduleComplex:
    """P_0 <- P_1 <- P_2 <- P_3 indexed by vertices, arrows, arrows, vertices."""
    cut_set = set(cut)
    check = is_cut(quiver, w, cut_set)
    if not check.ok:
        raise CutError("not a cut of the potential", check.as_dict())
    b = jacobian_algebra(quiver, w, cut_set, name="Jac")
    q = b.quiver
    w = Potential(q, w.terms)
    lengths = {len(cycle) for _, cycle in w.terms}
    top = max(lengths) if lengths else 0
    vertices = q.vertices
    arrows = q.arrows

    p0 = tuple(Generator(f"e{v}", v, v, 0, 0) for v in vertices)
    p1 = tuple(Generator(a.name, a.target, a.source, a.degree, 1) for a in arrows)
    p2 = tuple(Generator(f"d{a.name}", a.source, a.target, 1 - a.degree, top - 1) for a in arrows)
    p3 = tuple(Generator(f"w{v}", v, v, 1, top) for v in vertices)
    vpos = {v: k for k, v in enumerate(vertices)}

    def single(k: int) -> Path:
        return Path(1, (k,), arrows[k].source, arrows[k].target)

    def add(diff: Dict[Tuple[int, int], Tensor], key: Tuple[int, int], coef: Fraction, lam: Path, rho: Path) -> None:
        entry = diff.setdefault(key, {})
        entry[(lam, rho)] = entry.get((lam, rho), Fraction(0)) + coef
        if entry[(lam, rho)] == 0:
            del entry[(lam, rho)]

    d1: Dict[Tuple[int, int], Tensor] = {}
    for k, a in enumerate(arrows):
        add(d1, (vpos[a.source], k), Fraction(1), single(k), Path.trivial(a.source))
        add(d1, (vpos[a.target], k), Fraction(-1), Path.trivial(a.target), single(k))

    d2: Dict[Tuple[int, int], Tensor] = {}
    for coef, cycle in w.terms:
        for b_pos, b_arrow in enumerate(cycle):
            # rotate so b is applied last: q, a, p, then b
            rotated = cycle[b_pos + 1:] + cycle[:b_pos]
            for a_pos, a_arrow in enumerate(rotated):
                before = rotated[:a_pos]
                after = rotated[a_pos + 1:]
                lam = q.path_from_indices(after) if after else Path.trivial(arrows[a_arrow].target)
                rho = q.path_from_indices(before) if before else Path.trivial(arrows[b_arrow].target)
                add(d2, (a_arrow, b_arrow), coef, lam, rho)

    d3: Dict[Tuple[int, int], Tensor] = {}
    for k, a in enumerate(arrows):
        add(d3, (k, vpos[a.target]), Fraction(1), single(k), Path.trivial(a.target))
        add(d3, (k, vpos[a.source]), Fraction(-1), Path.trivial(a.source), single(k))

    logger.debug("Dimer bimodule complex with ranks %s", [len(p0), len(p1), len(p2), len(p3)])
    return BimoduleComplex(b, (p0, p1, p2, p3), (d1, d2, d3), "dimer-resolution")


# -----------------------------
# Hypotheses
# -----------------------------

@dataclass
class HypothesisReport:
    idempotent: Tuple[str, ...]
    finite_quotient: Finiteness
    a4_on_algebra: Optional[bool]
    a4_on_opposite: Optional[bool]
    sources: Dict[str, bool] = field(default_factory=dict)
    sinks: Dict[str, bool] = field(default_factory=dict)

    @property
    def orientation(self) -> str:
        sides = [name for name, ok in (("algebra", self.a4_on_algebra), ("opposite", self.a4_on_opposite)) if ok]
        return {0: "neither", 1: sides[0] if sides else "neither", 2: "both"}[len(sides)]

    @property
    def passed(self) -> bool:
        if not self.finite_quotient.is_yes:
            return False
        if self.a4_on_algebra and all(self.sources.values()):
            return True
        return bool(self.a4_on_opposite and all(self.sinks.values()))

    def as_dict(self) -> Dict[str, object]:
        return {
            "idempotent": list(self.idempotent),
            "A3_finite_quotient": self.finite_quotient.as_dict(),
            "A4_on_algebra": self.a4_on_algebra,
            "A4_on_opposite": self.a4_on_opposite,
            "A4_orientation": self.orientation,
            "sources_in_degree_zero_quiver": self.sources,
            "sinks_in_degree_zero_quiver": self.sinks,
            "passed": self.passed,
        }


def _corner_vanishes(a0: PresentedGradedAlgebra, ends: Set[str], starts: Set[str], cap: int) -> Optional[bool]:
    """Whether e_ends * A0 * e_starts = 0; None when it cannot be decided."""
    graph = a0.quiver.to_digraph()
    reachable = any(
        nx.has_path(graph, j, i) for j in starts for i in ends if i != j
    )
    if not reachable:
        return True
    gb = complete_groebner(a0, max(cap, a0.max_relation_length()))
    if not gb.complete:
        return None
    finiteness = is_finite_dimensional(gb, cap)
    if not finiteness.is_yes:
        return None
    return not any(p.target in ends and p.source in starts for p in normal_words(gb))


def check_main_hypotheses(b: PresentedGradedAlgebra, idempotent: Iterable[str], cap: int = DEFAULT_CAP) -> HypothesisReport:
    e = set(idempotent)
    rest = set(b.vertices) - e
    quotient = quotient_by_vertices(b, e)
    finite = is_finite_dimensional(quotient, max(cap, quotient.max_relation_length()))
    a0 = degree_zero_part(b)
    a4 = _corner_vanishes(a0, e, rest, cap)
    a4_op = _corner_vanishes(a0, rest, e, cap)
    sources = {v: not a0.quiver.incoming(v) for v in sorted(e)}
    sinks = {v: not a0.quiver.outgoing(v) for v in sorted(e)}
    report = HypothesisReport(tuple(sorted(e)), finite, a4, a4_op, sources, sinks)
    logger.info("Hypotheses for %s with e=%s: finite=%s, A4=%s", b.name, sorted(e), finite.status, report.orientation)
    return report
