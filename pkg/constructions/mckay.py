"""
McKay quivers of cyclic groups acting on affine space with weights a_1..a_d.

Vertices are "0".."n-1"; the arrow x{j}_{i} goes i -> i + a_j (mod n) and has
degree 1 exactly when it wraps around (i + a_j >= n).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from typing import Dict, List, Tuple

from algebra.pathalg import (
    AlgebraInputError,
    Arrow,
    Path,
    PathElement,
    PresentedGradedAlgebra,
    Quiver,
    degree_zero_part,
    quotient_by_vertices,
)
from checks.cycheck import BimoduleComplex, Generator, Tensor, tensor
from config.logger import logger


class WeightViolation(AlgebraInputError):
    pass


@dataclass(frozen=True)
class McKayInput:
    n: int
    a: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    @property
    def d(self) -> int:
        return len(self.a)

    @property
    def label(self) -> str:
        return f"{self.n};{','.join(map(str, self.a))}"


@dataclass(frozen=True)
class WeightReport:
    ok: bool
    violations: Tuple[str, ...] = ()

    def as_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "violations": list(self.violations)}


def validate_weights(inp: McKayInput) -> WeightReport:
    if not inp.a:
        raise WeightViolation("weight list is empty", {"n": inp.n})
    if inp.n < 2:
        raise WeightViolation(f"modulus must be at least 2, got {inp.n}", {"n": inp.n})
    violations: List[str] = []
    for j, aj in enumerate(inp.a, start=1):
        if not 0 < aj < inp.n:
            violations.append(f"B1: a_{j}={aj} is not in (0, {inp.n})")
        elif gcd(inp.n, aj) != 1:
            violations.append(f"B1: gcd({inp.n}, a_{j}={aj}) = {gcd(inp.n, aj)}")
    if sum(inp.a) != inp.n:
        violations.append(f"B2: sum of weights {sum(inp.a)} != {inp.n}")
    return WeightReport(not violations, tuple(violations))


def require_valid(inp: McKayInput) -> None:
    report = validate_weights(inp)
    if not report.ok:
        raise WeightViolation("; ".join(report.violations), report.as_dict())


def beilinson_input(d: int) -> McKayInput:
    return McKayInput(d, (1,) * d)


def arrow_name(j: int, i: int) -> str:
    return f"x{j}_{i}"


# -----------------------------
# The algebras B, A and their stable quotients
# -----------------------------

def mckay_algebra(inp: McKayInput) -> PresentedGradedAlgebra:
    require_valid(inp)
    n, a = inp.n, inp.a
    arrows = [
        Arrow(arrow_name(j, i), str(i), str((i + a[j - 1]) % n), int(i + a[j - 1] >= n))
        for j in range(1, inp.d + 1)
        for i in range(n)
    ]
    quiver = Quiver(tuple(str(i) for i in range(n)), tuple(arrows))
    relations = []
    for i in range(n):
        for j in range(1, inp.d + 1):
            for k in range(j + 1, inp.d + 1):
                # x_k after x_j  minus  x_j after x_k, both from i
                left = [arrow_name(j, i), arrow_name(k, (i + a[j - 1]) % n)]
                right = [arrow_name(k, i), arrow_name(j, (i + a[k - 1]) % n)]
                relations.append(PathElement.from_named(quiver, [(1, left), (-1, right)]))
    alg = PresentedGradedAlgebra(quiver, tuple(relations), f"B({inp.label})")
    logger.debug("McKay algebra %s: %d arrows, %d relations", alg.name, len(arrows), len(relations))
    return alg


def degree_zero_part_mckay(b: PresentedGradedAlgebra) -> PresentedGradedAlgebra:
    """Degree-0 arrows with the commutativity relations between them."""
    zero = {a.name for a in b.quiver.arrows if a.degree == 0}
    for k, rel in enumerate(b.relations):
        inside = [all(b.quiver.arrows[x].name in zero for x in p.arrows) for p in rel.paths()]
        if any(inside) and not all(inside):
            raise AlgebraInputError(
                "relation mixes degree-0 paths with paths through removed arrows",
                {"relation": k, "element": str(rel)},
            )
    label = b.name.replace("B(", "A(", 1) if b.name.startswith("B(") else ""
    return degree_zero_part(b, name=label)


def stable_algebra(alg: PresentedGradedAlgebra) -> PresentedGradedAlgebra:
    quotient = quotient_by_vertices(alg, {"0"})
    if alg.name.startswith(("A(", "B(")):
        return quotient.with_name(alg.name[0] + "bar" + alg.name[1:])
    return quotient


# -----------------------------
# Koszul bimodule complex
# -----------------------------

@dataclass(frozen=True)
class KoszulTermBasis:
    """For each l: (start vertex, increasing index tuple, twist) triples."""
    input: McKayInput
    terms: Tuple[Tuple[Tuple[int, Tuple[int, ...], int], ...], ...] = field(default=())

    def end_vertex(self, start: int, subset: Tuple[int, ...]) -> int:
        return (start + sum(self.input.a[j - 1] for j in subset)) % self.input.n

    def twist(self, start: int, subset: Tuple[int, ...]) -> int:
        return int(start + sum(self.input.a[j - 1] for j in subset) >= self.input.n)

    def rank(self, level: int) -> int:
        return len(self.terms[level])


def koszul_basis(inp: McKayInput) -> KoszulTermBasis:
    require_valid(inp)
    skeleton = KoszulTermBasis(inp)
    terms = []
    for level in range(inp.d + 1):
        rows = []
        for subset in combinations(range(1, inp.d + 1), level):
            for i in range(inp.n):
                rows.append((i, subset, skeleton.twist(i, subset)))
        terms.append(tuple(rows))
    basis = KoszulTermBasis(inp, tuple(terms))
    for level in range(inp.d + 1):
        assert basis.rank(level) == inp.n * comb(inp.d, level)
    return basis


def _wedge_label(start: int, subset: Tuple[int, ...]) -> str:
    if not subset:
        return f"e{start}"
    return "^".join(f"x{j}" for j in reversed(subset)) + f"@{start}"


def koszul_complex(inp: McKayInput) -> BimoduleComplex:
    """P_l = B (x) U_l (x) B with  1 (x) u (x) 1  mapped to the alternating sum of left and right insertions."""
    b = mckay_algebra(inp)
    quiver = b.quiver
    basis = koszul_basis(inp)
    n, a = inp.n, inp.a
    terms = []
    positions: List[Dict[Tuple[int, Tuple[int, ...]], int]] = []
    for level, rows in enumerate(basis.terms):
        gens = []
        index = {}
        for k, (i, subset, tw) in enumerate(rows):
            gens.append(Generator(_wedge_label(i, subset), str(basis.end_vertex(i, subset)), str(i), tw, level))
            index[(i, subset)] = k
        terms.append(tuple(gens))
        positions.append(index)

    def arrow_path(j: int, i: int) -> Path:
        return quiver.path([arrow_name(j, i)])

    differentials = []
    for level in range(1, inp.d + 1):
        diff: Dict[Tuple[int, int], Tensor] = {}
        for g, (i, subset, _) in enumerate(basis.terms[level]):
            end = basis.end_vertex(i, subset)
            for pos, j in enumerate(subset):
                sign = 1 if pos % 2 == 0 else -1
                rest = subset[:pos] + subset[pos + 1:]
                # x_j inserted on the left: u' from i, then x_j
                mid = basis.end_vertex(i, rest)
                h_left = positions[level - 1][(i, rest)]
                left_term = (sign, arrow_path(j, mid), Path.trivial(str(i)))
                # x_j inserted on the right: x_j from i, then u' from i + a_j
                shifted = (i + a[j - 1]) % n
                h_right = positions[level - 1][(shifted, rest)]
                right_term = (-sign, Path.trivial(str(end)), arrow_path(j, i))
                for h, part in ((h_left, left_term), (h_right, right_term)):
                    merged = dict(diff.get((h, g), {}))
                    for key, value in tensor(part).items():
                        merged[key] = merged.get(key, 0) + value
                    diff[(h, g)] = {k: v for k, v in merged.items() if v != 0}
        differentials.append(diff)
    return BimoduleComplex(b, tuple(terms), tuple(differentials), f"koszul({inp.label})")


# -----------------------------
# Lattice oracle
# -----------------------------

def invariant_monomial_count(inp: McKayInput, i: int, j: int, ell: int) -> int:
    """Monomials m in N^d with m.a = ell*n + (j - i): the paths from i to j of degree ell."""
    if ell < 0:
        raise AlgebraInputError("grade must be non-negative", {"grade": ell})
    target = ell * inp.n + (j - i)
    if target < 0:
        return 0
    bound = (ell + 1) * inp.n
    weights = inp.a

    def count(k: int, remaining: int) -> int:
        if k == len(weights):
            return int(remaining == 0)
        total = 0
        m = 0
        while m <= bound and m * weights[k] <= remaining:
            total += count(k + 1, remaining - m * weights[k])
            m += 1
        return total

    return count(0, target)
