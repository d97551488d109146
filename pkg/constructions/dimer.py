"""
Dimer models on the torus and the quivers with potential dual to them.

A dimer is a bipartite graph with its faces.  Each face lists its boundary
edges counterclockwise, starting with an edge walked from its white end to its
black end, so even positions are walked white -> black and odd positions
black -> white.  The arrow dual to an edge goes from the face on the edge's
right (walking white -> black) to the face on its left.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from algebra.lp import maximize
from algebra.normalform import Finiteness, is_finite_dimensional
from algebra.pathalg import AlgebraInputError, Arrow, Quiver, quotient_by_vertices
from config.logger import logger
from config.settings import DEFAULT_CAP, MAX_WORKERS
from constructions.qp import (
    HypothesisReport,
    Potential,
    check_main_hypotheses,
    is_cut,
    jacobian_algebra,
    truncated_algebra,
)


class DimerError(AlgebraInputError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    white: str
    black: str


Occurrence = Tuple[int, int]  # (face index, position)


@dataclass(frozen=True)
class DimerGraph:
    white: Tuple[str, ...]
    black: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    faces: Tuple[Tuple[str, ...], ...]
    face_names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "faces", tuple(tuple(f) for f in self.faces))
        if not self.face_names:
            object.__setattr__(self, "face_names", tuple(str(k + 1) for k in range(len(self.faces))))

    @cached_property
    def edge_index(self) -> Dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def occurrences(self) -> Dict[str, Dict[str, List[Occurrence]]]:
        """edge id -> {"even": [...], "odd": [...]} positions on face boundaries."""
        table: Dict[str, Dict[str, List[Occurrence]]] = {e.id: {"even": [], "odd": []} for e in self.edges}
        for f, face in enumerate(self.faces):
            for pos, eid in enumerate(face):
                if eid in table:
                    table[eid]["even" if pos % 2 == 0 else "odd"].append((f, pos))
        return table

    def incident(self, vertex: str) -> List[str]:
        return [e.id for e in self.edges if vertex in (e.white, e.black)]

    def left_face(self, eid: str) -> int:
        return self.occurrences[eid]["even"][0][0]

    def right_face(self, eid: str) -> int:
        return self.occurrences[eid]["odd"][0][0]

    def euler_characteristic(self) -> int:
        return len(self.white) + len(self.black) - len(self.edges) + len(self.faces)

    def vertex_cycle(self, vertex: str) -> List[str]:
        """Edges around a vertex in the order their dual arrows compose."""
        incident = self.incident(vertex)
        if not incident:
            return []
        is_white = vertex in self.white
        cycle = [incident[0]]
        while True:
            f, pos = self.occurrences[cycle[-1]]["even"][0]
            face = self.faces[f]
            nxt = face[(pos - 1) % len(face)] if is_white else face[(pos + 1) % len(face)]
            if nxt == cycle[0]:
                break
            if nxt in cycle or len(cycle) > len(incident):
                raise DimerError("edges around a vertex do not close up", {"vertex": vertex, "walk": cycle + [nxt]})
            cycle.append(nxt)
        if sorted(cycle) != sorted(incident):
            raise DimerError("vertex neighbourhood is not a single disc", {"vertex": vertex, "cycle": cycle, "incident": incident})
        return cycle

    def as_dict(self) -> Dict[str, object]:
        return {
            "white": list(self.white),
            "black": list(self.black),
            "edges": [{"id": e.id, "white": e.white, "black": e.black} for e in self.edges],
            "faces": [list(f) for f in self.faces],
            "face_names": list(self.face_names),
        }


# -----------------------------
# Validation
# -----------------------------

@dataclass(frozen=True)
class DimerReport:
    ok: bool
    violations: Tuple[str, ...] = ()
    euler_characteristic: int = 0

    def as_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "violations": list(self.violations), "euler_characteristic": self.euler_characteristic}


def validate_dimer(dimer: DimerGraph) -> DimerReport:
    violations: List[str] = []
    whites, blacks = set(dimer.white), set(dimer.black)
    if whites & blacks:
        violations.append(f"vertices coloured both ways: {sorted(whites & blacks)}")
    seen: Set[str] = set()
    for e in dimer.edges:
        if e.id in seen:
            violations.append(f"edge {e.id} declared twice")
        seen.add(e.id)
        if e.white not in whites or e.black not in blacks:
            violations.append(f"edge {e.id} does not join a white vertex to a black one")
    for f, face in enumerate(dimer.faces):
        name = dimer.face_names[f]
        unknown = [eid for eid in face if eid not in dimer.edge_index]
        if unknown:
            violations.append(f"face {name} uses unknown edges {unknown}")
            continue
        if not face or len(face) % 2:
            violations.append(f"face {name} has odd length {len(face)}")
            continue
        for pos, eid in enumerate(face):
            here, nxt = dimer.edge_index[eid], dimer.edge_index[face[(pos + 1) % len(face)]]
            shared = here.black == nxt.black if pos % 2 == 0 else here.white == nxt.white
            if not shared:
                violations.append(f"face {name} breaks at position {pos} ({eid} -> {nxt.id})")
    for eid, occ in dimer.occurrences.items():
        if len(occ["even"]) != 1 or len(occ["odd"]) != 1:
            violations.append(
                f"edge {eid} must bound faces once in each direction, got {len(occ['even'])} white->black and {len(occ['odd'])} black->white"
            )
    chi = dimer.euler_characteristic()
    if chi != 0:
        violations.append(f"Euler characteristic is {chi}, not 0")
    if not violations:
        for v in dimer.white + dimer.black:
            try:
                dimer.vertex_cycle(v)
            except DimerError as exc:
                violations.append(exc.args[0] + f" at {v}")
    return DimerReport(not violations, tuple(violations), chi)


def require_valid(dimer: DimerGraph) -> None:
    report = validate_dimer(dimer)
    if not report.ok:
        raise DimerError("; ".join(report.violations), report.as_dict())


# -----------------------------
# Dimer <-> quiver with potential
# -----------------------------

def dual_qp(dimer: DimerGraph, flip: bool = False) -> Tuple[Quiver, Potential]:
    """Faces become vertices and edges become arrows; W = sum of white cycles - sum of black cycles."""
    require_valid(dimer)
    arrows = []
    for e in dimer.edges:
        source, target = dimer.face_names[dimer.right_face(e.id)], dimer.face_names[dimer.left_face(e.id)]
        if flip:
            source, target = target, source
        arrows.append(Arrow(e.id, source, target, 0))
    quiver = Quiver(tuple(dimer.face_names), tuple(arrows))
    terms = []
    for sign, vertices in ((1, dimer.white), (-1, dimer.black)):
        for v in vertices:
            cycle = dimer.vertex_cycle(v)
            if flip:
                cycle = list(reversed(cycle))
            terms.append((sign, cycle))
    w = Potential.from_named(quiver, terms)
    logger.debug("dual QP: %d vertices, %d arrows, %d terms", len(quiver.vertices), len(arrows), len(w.terms))
    return quiver, w


def dimer_from_qp(quiver: Quiver, w: Potential) -> DimerGraph:
    """Inverse of dual_qp: every arrow must lie in exactly one +1 term and one -1 term."""
    positive: Dict[str, Tuple[str, List[str]]] = {}
    negative: Dict[str, Tuple[str, List[str]]] = {}
    white, black = [], []
    for t, (coef, names) in enumerate(w.named_terms()):
        if coef not in (1, -1):
            raise DimerError("potential coefficients must be +1 or -1", {"term": t, "coefficient": str(coef)})
        label = f"{'w' if coef > 0 else 'b'}{t}"
        (white if coef > 0 else black).append(label)
        table = positive if coef > 0 else negative
        for name in names:
            if name in table:
                raise DimerError("arrow occurs twice among terms of one sign", {"arrow": name})
            table[name] = (label, names)
    missing = [a.name for a in quiver.arrows if a.name not in positive or a.name not in negative]
    if missing:
        raise DimerError("arrows not in exactly one positive and one negative term", {"arrows": missing})

    def step(names: List[str], name: str, offset: int) -> str:
        return names[(names.index(name) + offset) % len(names)]

    edges = tuple(Edge(a.name, positive[a.name][0], negative[a.name][0]) for a in quiver.arrows)
    faces = []
    for v in quiver.vertices:
        heads = [quiver.arrows[k].name for k in quiver.incoming(v)]
        if not heads:
            raise DimerError("vertex has no incoming arrows", {"vertex": v})
        face: List[str] = []
        current = heads[0]
        while True:
            face.append(current)
            out = step(negative[current][1], current, 1)
            face.append(out)
            current = step(positive[out][1], out, -1)
            if current == heads[0]:
                break
            if len(face) > 2 * len(quiver.arrows):
                raise DimerError("face walk does not close", {"vertex": v})
        if sorted(face[::2]) != sorted(heads):
            raise DimerError("vertex is not a single face", {"vertex": v, "walk": face})
        faces.append(tuple(face))
    dimer = DimerGraph(tuple(white), tuple(black), edges, tuple(faces), tuple(quiver.vertices))
    require_valid(dimer)
    return dimer


# -----------------------------
# Perfect matchings
# -----------------------------

def _extend_matchings(dimer: DimerGraph, order: Sequence[str], start: int, used: Set[str], chosen: List[str]) -> List[Tuple[str, ...]]:
    found: List[Tuple[str, ...]] = []

    def search(k: int) -> None:
        if k == len(order):
            found.append(tuple(sorted(chosen)))
            return
        for e in dimer.edges:
            if e.black == order[k] and e.white not in used:
                used.add(e.white)
                chosen.append(e.id)
                search(k + 1)
                chosen.pop()
                used.discard(e.white)

    search(start)
    return found


def perfect_matchings(dimer: DimerGraph) -> List[Tuple[str, ...]]:
    """Edge sets meeting every vertex once, each sorted by id; the list is sorted."""
    if len(dimer.white) != len(dimer.black):
        return []
    order = sorted(dimer.black)
    if not order:
        return [()]
    branches = [e for e in dimer.edges if e.black == order[0]]
    with ThreadPoolExecutor(max_workers=MAX_WORKERS) as pool:
        parts = pool.map(lambda e: _extend_matchings(dimer, order, 1, {e.white}, [e.id]), branches)
        found = sorted({m for part in parts for m in part})
    logger.info("%d perfect matchings", len(found))
    return found


def is_perfect_matching(dimer: DimerGraph, edges: Iterable[str]) -> bool:
    chosen = list(edges)
    if any(eid not in dimer.edge_index for eid in chosen):
        return False
    whites = [dimer.edge_index[eid].white for eid in chosen]
    blacks = [dimer.edge_index[eid].black for eid in chosen]
    return sorted(whites) == sorted(dimer.white) and sorted(blacks) == sorted(dimer.black)


def matching_to_cut(dimer: DimerGraph, matching: Iterable[str]) -> Tuple[str, ...]:
    chosen = tuple(sorted(matching))
    if not is_perfect_matching(dimer, chosen):
        raise DimerError("edge set is not a perfect matching", {"edges": list(chosen)})
    return chosen


# -----------------------------
# Consistency charge
# -----------------------------

@dataclass
class ChargeAssignment:
    feasible: bool
    margin: Fraction
    charge: Dict[str, Fraction] = field(default_factory=dict)
    status: str = "optimal"

    def as_dict(self) -> Dict[str, object]:
        return {
            "feasible": self.feasible,
            "margin": str(self.margin),
            "charge": {k: str(v) for k, v in self.charge.items()},
            "lp_status": self.status,
        }


def verify_charge(dimer: DimerGraph, charge: Dict[str, Fraction]) -> List[str]:
    """Failed conditions for an R-charge; empty when it is a consistency charge."""
    failures = []
    for eid, r in charge.items():
        if r <= 0:
            failures.append(f"R({eid}) = {r} is not positive")
    for v in dimer.white + dimer.black:
        total = sum((charge[eid] for eid in dimer.incident(v)), Fraction(0))
        if total != 2:
            failures.append(f"charges around vertex {v} sum to {total}")
    for name, face in zip(dimer.face_names, dimer.faces):
        total = sum((1 - charge[eid] for eid in face), Fraction(0))
        if total != 2:
            failures.append(f"1 - R around face {name} sums to {total}")
    return failures


def consistency_charge(dimer: DimerGraph) -> ChargeAssignment:
    """Maximise the least charge subject to vertex and face sums; feasible iff it is positive."""
    require_valid(dimer)
    ids = [e.id for e in dimer.edges]
    m = len(ids)
    eps = m
    width = 2 * m + 1  # R_e, eps, slacks s_e with R_e - eps - s_e = 0
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for k in range(m):
        row = [Fraction(0)] * width
        row[k], row[eps], row[eps + 1 + k] = Fraction(1), Fraction(-1), Fraction(-1)
        rows.append(row)
        rhs.append(Fraction(0))
    for v in dimer.white + dimer.black:
        row = [Fraction(0)] * width
        for eid in dimer.incident(v):
            row[ids.index(eid)] += 1
        rows.append(row)
        rhs.append(Fraction(2))
    for face in dimer.faces:
        row = [Fraction(0)] * width
        for eid in face:
            row[ids.index(eid)] += 1
        rows.append(row)
        rhs.append(Fraction(len(face) - 2))
    cost = [Fraction(0)] * width
    cost[eps] = Fraction(1)
    result = maximize(cost, rows, rhs)
    if not result.is_optimal:
        return ChargeAssignment(False, Fraction(0), {}, result.status)
    charge = {eid: result.x[k] for k, eid in enumerate(ids)}
    margin = result.value
    feasible = margin > 0
    if feasible:
        failures = verify_charge(dimer, charge)
        if failures:
            raise DimerError("optimal charge fails re-verification", {"failures": failures})
    logger.info("consistency charge: margin %s, feasible=%s", margin, feasible)
    return ChargeAssignment(feasible, margin, charge if feasible else {}, result.status)


# -----------------------------
# From a perfect matching to the main hypotheses
# -----------------------------

@dataclass
class MatchingReport:
    matching: Tuple[str, ...]
    idempotent: Tuple[str, ...]
    truncated_finite: Finiteness
    hypotheses: HypothesisReport
    truncated_acyclic: bool
    stable_quiver_acyclic: bool

    @property
    def passed(self) -> bool:
        return self.truncated_finite.is_yes and self.hypotheses.passed

    def as_dict(self) -> Dict[str, object]:
        return {
            "matching": list(self.matching),
            "idempotent": list(self.idempotent),
            "truncated_finite": self.truncated_finite.as_dict(),
            "hypotheses": self.hypotheses.as_dict(),
            "truncated_quiver_acyclic": self.truncated_acyclic,
            "stable_quiver_acyclic": self.stable_quiver_acyclic,
            "passed": self.passed,
        }


def check_matching_hypotheses(
    dimer: DimerGraph,
    matching: Iterable[str],
    idempotent: Iterable[str],
    flip: bool = False,
    cap: int = DEFAULT_CAP,
) -> MatchingReport:
    """Grade the dual Jacobian algebra by a perfect matching and test the hypotheses at e."""
    cut = matching_to_cut(dimer, matching)
    quiver, w = dual_qp(dimer, flip)
    check = is_cut(quiver, w, cut)
    if not check.ok:
        raise DimerError("matching does not give a cut", check.as_dict())
    e = tuple(sorted(idempotent))
    unknown = set(e) - set(quiver.vertices)
    if unknown:
        raise DimerError("idempotent names unknown faces", {"unknown": sorted(unknown)})
    truncated = truncated_algebra(quiver, w, cut)
    finite = is_finite_dimensional(truncated, max(cap, truncated.max_relation_length()))
    b = jacobian_algebra(quiver, w, cut, name="Jac(dimer)")
    hypotheses = check_main_hypotheses(b, e, cap)
    stable = quotient_by_vertices(truncated, set(e))
    return MatchingReport(cut, e, finite, hypotheses, truncated.quiver.is_acyclic(), stable.quiver.is_acyclic())


def first_passing_matching(
    dimer: DimerGraph, idempotent: Iterable[str], flip: bool = False, cap: int = DEFAULT_CAP
) -> Optional[MatchingReport]:
    e = tuple(idempotent)
    for matching in perfect_matchings(dimer):
        report = check_matching_hypotheses(dimer, matching, e, flip, cap)
        if report.passed:
            return report
    return None
