"""
Exact two-phase simplex over Fractions.

Problems are in standard equality form: maximize c.x subject to A x = b, x >= 0.
Pivoting follows Bland's rule so the method terminates without tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from config.logger import logger


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    x: List[Fraction] = field(default_factory=list)

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


class SimplexTableau:
    """Dense tableau; row k expresses basic variable basis[k] in terms of the others."""

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]) -> None:
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.width = len(rows[0]) if rows else 0
        self.pivots = 0

    def pivot(self, r: int, j: int) -> None:
        piv = self.rows[r][j]
        self.rows[r] = [v / piv for v in self.rows[r]]
        self.rhs[r] /= piv
        for k in range(len(self.rows)):
            if k == r:
                continue
            factor = self.rows[k][j]
            if factor != 0:
                self.rows[k] = [a - factor * b for a, b in zip(self.rows[k], self.rows[r])]
                self.rhs[k] -= factor * self.rhs[r]
        self.basis[r] = j
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction]) -> List[Fraction]:
        red = list(cost)
        for k, b in enumerate(self.basis):
            cb = cost[b]
            if cb != 0:
                red = [rc - cb * a for rc, a in zip(red, self.rows[k])]
        return red

    def objective(self, cost: Sequence[Fraction]) -> Fraction:
        return sum((cost[b] * self.rhs[k] for k, b in enumerate(self.basis)), Fraction(0))

    def optimize(self, cost: Sequence[Fraction], allowed: Sequence[bool]) -> str:
        """Maximize cost.x over the current feasible basis."""
        while True:
            red = self.reduced_costs(cost)
            entering = next((j for j in range(self.width) if allowed[j] and red[j] > 0), None)
            if entering is None:
                return "optimal"
            best = None
            for k in range(len(self.rows)):
                a = self.rows[k][entering]
                if a > 0:
                    ratio = self.rhs[k] / a
                    key = (ratio, self.basis[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)

    def solution(self, n: int) -> List[Fraction]:
        x = [Fraction(0)] * n
        for k, b in enumerate(self.basis):
            if b < n:
                x[b] = self.rhs[k]
        return x


def maximize(
    cost: Sequence[Fraction],
    a_eq: Sequence[Sequence[Fraction]],
    b_eq: Sequence[Fraction],
) -> LPResult:
    n = len(cost)
    m = len(a_eq)
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for i in range(m):
        row = [Fraction(v) for v in a_eq[i]]
        b = Fraction(b_eq[i])
        if b < 0:
            row = [-v for v in row]
            b = -b
        artificial = [Fraction(int(k == i)) for k in range(m)]
        rows.append(row + artificial)
        rhs.append(b)
    tableau = SimplexTableau(rows, rhs, [n + i for i in range(m)])

    phase_one = [Fraction(0)] * n + [Fraction(-1)] * m
    tableau.optimize(phase_one, [True] * (n + m))
    if tableau.objective(phase_one) != 0:
        logger.debug("LP infeasible after %d pivots", tableau.pivots)
        return LPResult("infeasible")

    # drive artificial variables out; rows that cannot be pivoted are redundant
    keep = []
    for k in range(m):
        if tableau.basis[k] >= n:
            j = next((j for j in range(n) if tableau.rows[k][j] != 0), None)
            if j is None:
                continue
            tableau.pivot(k, j)
        keep.append(k)
    tableau.rows = [tableau.rows[k] for k in keep]
    tableau.rhs = [tableau.rhs[k] for k in keep]
    tableau.basis = [tableau.basis[k] for k in keep]

    phase_two = [Fraction(c) for c in cost] + [Fraction(0)] * m
    status = tableau.optimize(phase_two, [j < n for j in range(n + m)])
    if status == "unbounded":
        return LPResult("unbounded")
    logger.debug("LP optimal after %d pivots", tableau.pivots)
    return LPResult("optimal", tableau.objective(phase_two), tableau.solution(n))
