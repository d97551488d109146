"""
Explicit complexes of projective bimodules and their verification.

A term P_l is a direct sum of B e_left (x) e_right B over its generators.  A
differential entry from generator g of P_l to generator h of P_(l-1) is a sum
of tensors  lam (x) rho  with lam a path from h.left to g.left and rho a path
from g.right to h.right, so that  b (x) b'  maps to  b*lam (x) rho*b'.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from algebra.linalg import from_entries, rank
from algebra.normalform import GroebnerBasis, graded_dimension_table, normal_words_upto
from algebra.pathalg import AlgebraInputError, Path, PresentedGradedAlgebra, Quiver, compose
from config.logger import logger
from config.settings import DEFAULT_DEGCAP, MAX_WORKERS

Tensor = Dict[Tuple[Path, Path], Fraction]


class IncompleteBasisError(AlgebraInputError):
    """The Groebner basis is truncated below the weights a check needs."""


@dataclass(frozen=True)
class Generator:
    label: str
    left: str
    right: str
    twist: int  # internal degree of the generator
    weight: int  # path-length weight of the generator

    def dual(self) -> Tuple[str, str, int]:
        return (self.right, self.left, 1 - self.twist)

    def key(self) -> Tuple[str, str, int]:
        return (self.left, self.right, self.twist)


@dataclass(frozen=True, eq=False)
class BimoduleComplex:
    algebra: PresentedGradedAlgebra
    terms: Tuple[Tuple[Generator, ...], ...]
    # differentials[l - 1] is P_l -> P_(l-1), keyed by (h, g)
    differentials: Tuple[Mapping[Tuple[int, int], Tensor], ...]
    name: str = field(default="")

    @property
    def length(self) -> int:
        return len(self.terms)

    def ranks(self) -> List[int]:
        return [len(t) for t in self.terms]

    def truncate(self, count: int) -> "BimoduleComplex":
        return replace(self, terms=self.terms[:count], differentials=self.differentials[:max(count - 1, 0)])

    def with_entry(self, level: int, h: int, g: int, entry: Tensor) -> "BimoduleComplex":
        diffs = [dict(d) for d in self.differentials]
        diffs[level - 1][(h, g)] = dict(entry)
        return replace(self, differentials=tuple(diffs))

    def as_dict(self) -> Dict[str, object]:
        quiver = self.algebra.quiver
        return {
            "name": self.name,
            "ranks": self.ranks(),
            "terms": [
                [{"label": g.label, "left": g.left, "right": g.right, "twist": g.twist} for g in term]
                for term in self.terms
            ],
            "differentials": [
                [
                    {
                        "from": self.terms[level + 1][g].label,
                        "to": self.terms[level][h].label,
                        "entry": [
                            {"coef": str(c), "left": quiver.names(lam), "right": quiver.names(rho)}
                            for (lam, rho), c in sorted(entry.items())
                        ],
                    }
                    for (h, g), entry in sorted(diff.items())
                    if entry
                ]
                for level, diff in enumerate(self.differentials)
            ],
        }


def tensor(*parts: Tuple[object, Path, Path]) -> Tensor:
    acc: Tensor = {}
    for coef, lam, rho in parts:
        key = (lam, rho)
        acc[key] = acc.get(key, Fraction(0)) + Fraction(coef)
    return {k: v for k, v in acc.items() if v != 0}


# -----------------------------
# Normal-form arithmetic on tensors
# -----------------------------

class _TensorArithmetic:
    def __init__(self, gb: GroebnerBasis) -> None:
        self.gb = gb
        self._cache: Dict[Tuple[Path, Path], Dict[Path, Fraction]] = {}

    def product(self, outer: Path, inner: Path) -> Dict[Path, Fraction]:
        """Normal form of outer*inner (inner applied first)."""
        key = (outer, inner)
        hit = self._cache.get(key)
        if hit is None:
            joined = compose(outer, inner)
            hit = {} if joined is None else self.gb.reduce({joined: Fraction(1)})
            self._cache[key] = hit
        return hit

    def compose_entries(self, outer: Tensor, inner: Tensor) -> Tensor:
        """outer after inner: left factors multiply on the right, right factors on the left."""
        acc: Tensor = {}
        for (lam, rho), c in inner.items():
            for (lam2, rho2), d in outer.items():
                for l3, a in self.product(lam, lam2).items():
                    for r3, b in self.product(rho2, rho).items():
                        acc[(l3, r3)] = acc.get((l3, r3), Fraction(0)) + c * d * a * b
        return {k: v for k, v in acc.items() if v != 0}


# -----------------------------
# Reports
# -----------------------------

@dataclass
class ComplexReport:
    name: str
    square_zero: bool = True
    offending: Optional[Dict[str, object]] = None
    homology: Dict[int, Dict[int, int]] = field(default_factory=dict)
    algebra_dims: Dict[int, int] = field(default_factory=dict)
    exact: bool = True
    consistent: bool = True
    grading: str = "length"
    degcap: int = DEFAULT_DEGCAP

    @property
    def passed(self) -> bool:
        return self.square_zero and self.exact and self.consistent

    def as_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "passed": self.passed,
            "square_zero": self.square_zero,
            "offending": self.offending,
            "exact": self.exact,
            "consistent_with_basis": self.consistent,
            "grading": self.grading,
            "degcap": self.degcap,
            "homology": {str(d): {str(k): v for k, v in row.items()} for d, row in self.homology.items()},
            "algebra_dims": {str(d): v for d, v in self.algebra_dims.items()},
        }


def check_square_zero(complex_: BimoduleComplex, gb: GroebnerBasis) -> Optional[Dict[str, object]]:
    """None when every composite of consecutive differentials reduces to 0, else the first offending entry."""
    arith = _TensorArithmetic(gb)
    quiver = gb.quiver
    for level in range(2, complex_.length):
        upper = complex_.differentials[level - 1]  # P_level -> P_(level-1)
        lower = complex_.differentials[level - 2]  # P_(level-1) -> P_(level-2)
        mids: Dict[int, List[Tuple[int, Tensor]]] = {}
        for (h, m), entry in lower.items():
            mids.setdefault(m, []).append((h, entry))
        for g in range(len(complex_.terms[level])):
            totals: Dict[int, Tensor] = {}
            for (m, g2), entry in upper.items():
                if g2 != g:
                    continue
                for h, low in mids.get(m, ()):
                    part = arith.compose_entries(low, entry)
                    acc = totals.setdefault(h, {})
                    for k, v in part.items():
                        acc[k] = acc.get(k, Fraction(0)) + v
            for h, acc in sorted(totals.items()):
                residue = {k: v for k, v in acc.items() if v != 0}
                if residue:
                    (lam, rho), c = sorted(residue.items())[0]
                    return {
                        "level": level,
                        "from": complex_.terms[level][g].label,
                        "to": complex_.terms[level - 2][h].label,
                        "term": {"coef": str(c), "left": quiver.names(lam), "right": quiver.names(rho)},
                    }
    return None


def check_entries(complex_: BimoduleComplex, quiver: Quiver, by: str = "degree") -> Optional[Dict[str, object]]:
    """None when every differential entry is a homogeneous map of generators, else the first offending entry.

    lam must run from h.left to g.left and rho from g.right to h.right, and
    twist(g) = twist(h) + deg(lam) + deg(rho).  Under the length grading the
    generator weights must add up the same way with path lengths.
    """
    for level in range(1, complex_.length):
        upper, lower = complex_.terms[level], complex_.terms[level - 1]
        for (h, g), entry in sorted(complex_.differentials[level - 1].items()):
            gen, tgt = upper[g], lower[h]
            for (lam, rho), c in sorted(entry.items()):
                reason = None
                if (lam.source, lam.target, rho.source, rho.target) != (tgt.left, gen.left, gen.right, tgt.right):
                    reason = "endpoints"
                elif tgt.twist + quiver.degree(lam) + quiver.degree(rho) != gen.twist:
                    reason = "twist"
                elif by == "length" and tgt.weight + lam.length + rho.length != gen.weight:
                    reason = "weight"
                if reason is not None:
                    return {
                        "level": level,
                        "from": gen.label,
                        "to": tgt.label,
                        "reason": f"entry leaves the graded piece ({reason})",
                        "term": {"coef": str(c), "left": quiver.names(lam), "right": quiver.names(rho)},
                    }
    return None


class _Piece:
    """The weight-delta piece of every term, split by the outer vertex pair (p, q)."""

    def __init__(self, complex_: BimoduleComplex, gb: GroebnerBasis, words: Sequence[Path], by: str) -> None:
        self.complex = complex_
        self.gb = gb
        self.by = by
        self.quiver = gb.quiver
        self.arith = _TensorArithmetic(gb)
        self.words = words

    def weight(self, p: Path) -> int:
        return p.length if self.by == "length" else self.quiver.degree(p)

    def gen_weight(self, g: Generator) -> int:
        return g.weight if self.by == "length" else g.twist

    def basis(self, level: int, delta: int) -> Dict[Tuple[str, str], List[Tuple[int, Path, Path]]]:
        out: Dict[Tuple[str, str], List[Tuple[int, Path, Path]]] = {}
        for k, g in enumerate(self.complex.terms[level]):
            budget = delta - self.gen_weight(g)
            if budget < 0:
                continue
            lefts = [b for b in self.words if b.source == g.left and self.weight(b) <= budget]
            rights = [b for b in self.words if b.target == g.right and self.weight(b) <= budget]
            for b in lefts:
                for b2 in rights:
                    if self.weight(b) + self.weight(b2) == budget:
                        out.setdefault((b.target, b2.source), []).append((k, b, b2))
        return out

    def algebra_basis(self, delta: int) -> Dict[Tuple[str, str], List[Path]]:
        out: Dict[Tuple[str, str], List[Path]] = {}
        for w in self.words:
            if self.weight(w) == delta:
                out.setdefault((w.target, w.source), []).append(w)
        return out

    def differential_rank(self, level: int, src: List[Tuple[int, Path, Path]], dst: List[Tuple[int, Path, Path]]) -> int:
        if not src or not dst:
            return 0
        index = {key: r for r, key in enumerate(dst)}
        diff = self.complex.differentials[level - 1]
        by_source: Dict[int, List[Tuple[int, Tensor]]] = {}
        for (h, g), entry in diff.items():
            by_source.setdefault(g, []).append((h, entry))
        cells: Dict[Tuple[int, int], Fraction] = {}
        for col, (g, b, b2) in enumerate(src):
            for h, entry in by_source.get(g, ()):
                for (lam, rho), c in entry.items():
                    for left, x in self.arith.product(b, lam).items():
                        for right, y in self.arith.product(rho, b2).items():
                            row = index[(h, left, right)]  # check_entries keeps images in the piece
                            cells[(row, col)] = cells.get((row, col), Fraction(0)) + c * x * y
        return rank(from_entries(cells, (len(dst), len(src))))

    def augmentation_rank(self, src: List[Tuple[int, Path, Path]], dst: List[Path]) -> int:
        if not src or not dst:
            return 0
        index = {w: r for r, w in enumerate(dst)}
        cells: Dict[Tuple[int, int], Fraction] = {}
        for col, (_, b, b2) in enumerate(src):
            for w, c in self.arith.product(b, b2).items():
                cells[(index[w], col)] = cells.get((index[w], col), Fraction(0)) + c
        return rank(from_entries(cells, (len(dst), len(src))))

    def homology(self, delta: int) -> Tuple[Dict[int, int], int]:
        """Homology dims of the augmented complex at weight delta; key -1 is the algebra slot."""
        levels = self.complex.length
        bases = [self.basis(level, delta) for level in range(levels)]
        alg = self.algebra_basis(delta)
        blocks = set(alg)
        for b in bases:
            blocks |= set(b)
        result: Dict[int, int] = {level: 0 for level in range(-1, levels)}
        for block in sorted(blocks):
            dims = [len(bases[level].get(block, [])) for level in range(levels)]
            ranks = [0] * (levels + 1)  # ranks[l] = rank of P_l -> P_(l-1); ranks[0] = augmentation
            ranks[0] = self.augmentation_rank(bases[0].get(block, []), alg.get(block, []))
            for level in range(1, levels):
                ranks[level] = self.differential_rank(level, bases[level].get(block, []), bases[level - 1].get(block, []))
            for level in range(levels):
                result[level] += dims[level] - ranks[level] - ranks[level + 1]
            result[-1] += len(alg.get(block, [])) - ranks[0]
        return result, sum(len(v) for v in alg.values())


def verify_complex(
    complex_: BimoduleComplex,
    gb: GroebnerBasis,
    degcap: int = DEFAULT_DEGCAP,
) -> ComplexReport:
    """Square-zero check plus exactness of the augmented complex in every weight up to degcap."""
    by = "length" if gb.algebra.is_length_homogeneous() else "degree"
    certified = all(gb.certifies_length(d) if by == "length" else gb.certifies_grade(d) for d in range(degcap + 1))
    if not certified:
        raise IncompleteBasisError(
            f"basis status {gb.status} cannot certify weights up to {degcap}",
            {"status": gb.status, "degcap": degcap},
        )
    report = ComplexReport(complex_.name, grading=by, degcap=degcap)
    stray = check_entries(complex_, gb.quiver, by)
    if stray is not None:
        logger.warning("Differential of %s is not homogeneous: %s", complex_.name, stray)
        report.consistent = False
        report.offending = stray
        report.exact = False
        return report
    offending = check_square_zero(complex_, gb)
    if offending is not None:
        logger.warning("Composite differential is nonzero in %s: %s", complex_.name, offending)
        report.square_zero = False
        report.offending = offending
        report.exact = False
        return report

    words = normal_words_upto(gb, degcap, by)
    piece = _Piece(complex_, gb, words, by)
    with ThreadPoolExecutor(max_workers=MAX_WORKERS) as pool:
        results = list(pool.map(piece.homology, range(degcap + 1)))
    expected = algebra_piece_dims(gb, degcap, by)
    for delta, (homology, alg_dim) in enumerate(results):
        if expected[delta] != alg_dim:
            report.consistent = False
        report.homology[delta] = {k: v for k, v in homology.items() if k >= 0}
        report.algebra_dims[delta] = alg_dim
        if any(v != 0 for v in homology.values()):
            report.exact = False
            logger.warning("Weight %d of %s is not exact: %s", delta, complex_.name, homology)
    logger.info("Verified %s up to weight %d: exact=%s", complex_.name, degcap, report.exact)
    return report


def algebra_piece_dims(gb: GroebnerBasis, degcap: int, by: str) -> Dict[int, int]:
    table = graded_dimension_table(gb, degcap, by=by)
    return {d: sum(row[d] or 0 for row in table.values()) for d in range(degcap + 1)}


# -----------------------------
# Self-duality
# -----------------------------

@dataclass
class DualityReport:
    dimension: int
    matches: bool
    mismatches: List[Dict[str, object]] = field(default_factory=list)

    def as_dict(self) -> Dict[str, object]:
        return {"d": self.dimension, "self_dual": self.matches, "mismatches": self.mismatches}


def verify_self_duality(complex_: BimoduleComplex, d: int) -> DualityReport:
    """P_l against the dual of P_(d-l): left and right swap, twist t becomes 1 - t."""
    if complex_.length != d + 1:
        return DualityReport(d, False, [{"reason": "length", "expected": d + 1, "found": complex_.length}])
    mismatches = []
    for level in range(d + 1):
        here = Counter(g.key() for g in complex_.terms[level])
        there = Counter(g.dual() for g in complex_.terms[d - level])
        if here != there:
            mismatches.append({
                "level": level,
                "only_here": sorted(map(list, (here - there).elements())),
                "only_dual": sorted(map(list, (there - here).elements())),
            })
    return DualityReport(d, not mismatches, mismatches)
