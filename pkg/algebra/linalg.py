"""Exact rational linear algebra on top of sympy's DomainMatrix over QQ."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = List[Fraction]


def qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def frac(x) -> Fraction:
    num = getattr(x, "numerator", None)
    den = getattr(x, "denominator", None)
    if num is not None and den is not None and not callable(num):
        return Fraction(int(num), int(den))
    return Fraction(str(x))


def zeros(rows: int, cols: int) -> DomainMatrix:
    return DomainMatrix.zeros((rows, cols), QQ).to_dense()


def eye(n: int) -> DomainMatrix:
    return DomainMatrix.eye(n, QQ).to_dense()


def matrix(rows: Sequence[Sequence[object]], shape: Optional[Tuple[int, int]] = None) -> DomainMatrix:
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    if shape[0] == 0 or shape[1] == 0:
        return zeros(*shape)
    return DomainMatrix([[qq(x) for x in row] for row in rows], shape, QQ)


def from_entries(entries: Dict[Tuple[int, int], Fraction], shape: Tuple[int, int]) -> DomainMatrix:
    rows = [[Fraction(0)] * shape[1] for _ in range(shape[0])]
    for (i, j), v in entries.items():
        rows[i][j] += v
    return matrix(rows, shape)


def from_columns(columns: Sequence[Sequence[Fraction]], nrows: int) -> DomainMatrix:
    rows = [[columns[j][i] for j in range(len(columns))] for i in range(nrows)]
    return matrix(rows, (nrows, len(columns)))


def entries(m: DomainMatrix) -> List[List[Fraction]]:
    r, c = m.shape
    if r == 0 or c == 0:
        return [[] for _ in range(r)]
    dense = m.to_dense()
    if hasattr(dense, "to_list"):
        raw = dense.to_list()
    else:
        raw = dense.rep.to_list()
    return [[frac(x) for x in row] for row in raw]


def columns(m: DomainMatrix) -> List[Vector]:
    rows = entries(m)
    r, c = m.shape
    return [[rows[i][j] for i in range(r)] for j in range(c)]


def apply(m: DomainMatrix, vec: Sequence[Fraction]) -> Vector:
    if m.shape[0] == 0:
        return []
    if m.shape[1] == 0:
        return [Fraction(0)] * m.shape[0]
    return [v[0] for v in entries(m.matmul(matrix([[x] for x in vec], (len(vec), 1))))]


def matmul(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    if 0 in a.shape or 0 in b.shape:
        return zeros(a.shape[0], b.shape[1])
    return a.matmul(b)


def add(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if 0 in a.shape:
        return a
    return a + b


def neg(a: DomainMatrix) -> DomainMatrix:
    if 0 in a.shape:
        return a
    return -a


def transpose(a: DomainMatrix) -> DomainMatrix:
    if 0 in a.shape:
        return zeros(a.shape[1], a.shape[0])
    return a.transpose()


def block(blocks: Sequence[Sequence[DomainMatrix]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> DomainMatrix:
    """Assemble a block matrix; every block must already have the matching shape."""
    rows: List[List[Fraction]] = [[Fraction(0)] * sum(col_sizes) for _ in range(sum(row_sizes))]
    r0 = 0
    for bi, rsize in enumerate(row_sizes):
        c0 = 0
        for bj, csize in enumerate(col_sizes):
            blk = blocks[bi][bj]
            if blk is not None and rsize and csize:
                if blk.shape != (rsize, csize):
                    raise ValueError(f"block ({bi},{bj}) has shape {blk.shape}, expected {(rsize, csize)}")
                for i, row in enumerate(entries(blk)):
                    rows[r0 + i][c0:c0 + csize] = row
            c0 += csize
        r0 += rsize
    return matrix(rows, (sum(row_sizes), sum(col_sizes)))


def kron(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    ar, ac = a.shape
    br, bc = b.shape
    ea, eb = entries(a), entries(b)
    rows = [[Fraction(0)] * (ac * bc) for _ in range(ar * br)]
    for i in range(ar):
        for j in range(ac):
            x = ea[i][j]
            if x == 0:
                continue
            for k in range(br):
                for l in range(bc):
                    rows[i * br + k][j * bc + l] = x * eb[k][l]
    return matrix(rows, (ar * br, ac * bc))


def rank(m: DomainMatrix) -> int:
    if 0 in m.shape:
        return 0
    return m.rank()


def rref(m: DomainMatrix) -> Tuple[List[List[Fraction]], Tuple[int, ...]]:
    if 0 in m.shape:
        return entries(m), ()
    reduced, pivots = m.rref()
    return entries(reduced), tuple(pivots)


def rank_of_rows(rows: Sequence[Dict[int, Fraction]], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    dense = [[Fraction(0)] * ncols for _ in rows]
    for i, row in enumerate(rows):
        for j, v in row.items():
            dense[i][j] += v
    return rank(matrix(dense, (len(rows), ncols)))


def nullspace(m: DomainMatrix) -> List[Vector]:
    """Basis of {x : m x = 0} as column vectors."""
    nrows, ncols = m.shape
    if ncols == 0:
        return []
    if nrows == 0:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -reduced[r][free]
        basis.append(vec)
    return basis


def solve(m: DomainMatrix, rhs: Sequence[Fraction]) -> Optional[Vector]:
    """One solution of m x = rhs (free variables set to 0), or None."""
    nrows, ncols = m.shape
    if nrows == 0:
        return [Fraction(0)] * ncols
    if ncols == 0:
        return [] if all(v == 0 for v in rhs) else None
    aug = matrix([row + [rhs[i]] for i, row in enumerate(entries(m))], (nrows, ncols + 1))
    reduced, pivots = rref(aug)
    if ncols in pivots:
        return None
    sol = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        sol[p] = reduced[r][ncols]
    return sol


def independent_columns(vectors: Sequence[Vector], dim: int) -> List[int]:
    """Indices of a maximal independent subfamily, chosen greedily left to right."""
    if not vectors or dim == 0:
        return []
    _, pivots = rref(from_columns(vectors, dim))
    return list(pivots)


def extend_to_basis(span: Sequence[Vector], candidates: Sequence[Vector], dim: int) -> List[int]:
    """Indices of candidates that extend span(span) to span(span + candidates)."""
    if not candidates:
        return []
    picked = independent_columns(list(span) + list(candidates), dim)
    return [k - len(span) for k in picked if k >= len(span)]


class QuotientSpace:
    """V / W with a chosen section (standard basis vectors) and a projection."""

    def __init__(self, dim: int, relations: Sequence[Vector]) -> None:
        self.dim = dim
        keep = [relations[k] for k in independent_columns(list(relations), dim)]
        units = [[Fraction(int(i == j)) for i in range(dim)] for j in range(dim)]
        chosen = extend_to_basis(keep, units, dim)
        self.section_indices = chosen
        self.size = len(chosen)
        if dim == 0:
            self._inverse = zeros(0, 0)
        else:
            full = from_columns(keep + [units[j] for j in chosen], dim)
            self._inverse = full.inv()
        self._offset = len(keep)

    def project(self, vec: Sequence[Fraction]) -> Vector:
        if self.size == 0:
            return []
        coords = apply(self._inverse, vec)
        return coords[self._offset:]

    def lift(self, coords: Sequence[Fraction]) -> Vector:
        vec = [Fraction(0)] * self.dim
        for c, j in zip(coords, self.section_indices):
            vec[j] = c
        return vec


def charpoly(m: DomainMatrix) -> List[Fraction]:
    return [frac(c) for c in m.charpoly()]


def det(m: DomainMatrix) -> Fraction:
    if m.shape == (0, 0):
        return Fraction(1)
    return frac(m.det())


def inverse(m: DomainMatrix) -> DomainMatrix:
    return m.inv()


def is_zero(m: DomainMatrix) -> bool:
    return all(x == 0 for row in entries(m) for x in row)


def vector_is_zero(vec: Iterable[Fraction]) -> bool:
    return all(x == 0 for x in vec)
