"""Resolutions, Ext, global dimension, and the Cartan and Coxeter invariants of a finite model."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.matrices import DomainMatrix

from algebra.linalg import block, charpoly, det, inverse, matmul, matrix, neg, rank, transpose
from algebra.pathalg import AlgebraInputError
from config.logger import logger
from config.settings import DEFAULT_RESOLUTION_CAP
from repthy.complexes import Entries, ModuleComplex, ProjComplex, ProjectiveSum, resolve
from repthy.model import FiniteAlgebraModel, Representation, simple_module


class SingularCartanError(AlgebraInputError):
    pass


# -----------------------------
# Projective resolutions
# -----------------------------

@dataclass(eq=False)
class Resolution:
    """P_k -> ... -> P_0 -> M, with P_k stored in cohomological degree -k."""
    module: Representation
    complex: ProjComplex
    augmentation: Dict[int, List[Fraction]]
    complete: bool

    def term(self, k: int) -> ProjectiveSum:
        return self.complex.term(-k)

    def differential(self, k: int) -> Entries:
        """Entries of d_k: P_k -> P_{k-1}."""
        return self.complex.diff(-k)

    @property
    def length(self) -> int:
        degrees = self.complex.degrees()
        return -degrees[0] if degrees else -1

    def ranks(self) -> List[Dict[str, int]]:
        return [
            {v: self.term(k).gens.count(v) for v in sorted(set(self.term(k).gens))}
            for k in range(self.length + 1)
        ]


def projective_resolution(module: Representation, cap: int = DEFAULT_RESOLUTION_CAP) -> Resolution:
    """Minimal projective resolution; generators of each kernel are taken from its top."""
    resolved = resolve(ModuleComplex(module.model, module.side, {0: module}), cap)
    res = Resolution(module, resolved.complex, resolved.images.get(0, {}), resolved.complete)
    logger.debug("resolution of %s: length %d, complete=%s", module.name or "module", res.length, res.complete)
    return res


def projective_dimension(module: Representation, cap: int = DEFAULT_RESOLUTION_CAP) -> Optional[int]:
    res = projective_resolution(module, cap)
    return res.length if res.complete else None


# -----------------------------
# Ext
# -----------------------------

def _hom_differential(res: Resolution, target: Representation, k: int) -> DomainMatrix:
    """Hom(P_k, N) -> Hom(P_{k+1}, N), with Hom(P_v, N) = N_v."""
    src, dst = res.term(k), res.term(k + 1)
    row_sizes = [target.dims[v] for v in dst.gens]
    col_sizes = [target.dims[v] for v in src.gens]
    entries = res.differential(k + 1)
    blocks = [
        [
            target.act(entries.get((g, g2), {}), src.gens[g], dst.gens[g2])
            if (g, g2) in entries else None
            for g in range(len(src.gens))
        ]
        for g2 in range(len(dst.gens))
    ]
    return block(blocks, row_sizes, col_sizes)


def ext_dim(module: Representation, target: Representation, k: int, cap: Optional[int] = None) -> int:
    if module.side != target.side:
        raise AlgebraInputError("Ext between modules on different sides", {"sides": [module.side, target.side]})
    if k < 0:
        return 0
    res = projective_resolution(module, max(cap or DEFAULT_RESOLUTION_CAP, k + 1))
    if not res.complete and res.length < k + 1:
        raise AlgebraInputError("resolution too short for the requested Ext degree", {"degree": k, "length": res.length})
    hom_k = sum(target.dims[v] for v in res.term(k).gens)
    return hom_k - rank(_hom_differential(res, target, k)) - (rank(_hom_differential(res, target, k - 1)) if k else 0)


# -----------------------------
# Global dimension
# -----------------------------

@dataclass(frozen=True)
class GlobalDimension:
    value: Optional[int]
    cap: int
    per_simple: Tuple[Tuple[str, Optional[int]], ...] = ()

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def as_dict(self) -> Dict[str, object]:
        return {
            "global_dimension": self.value if self.value is not None else f">={self.cap}",
            "cap": self.cap,
            "projective_dimensions": {v: (d if d is not None else f">={self.cap}") for v, d in self.per_simple},
        }


def global_dimension(model: FiniteAlgebraModel, cap: int = DEFAULT_RESOLUTION_CAP) -> GlobalDimension:
    per_simple = tuple((v, projective_dimension(simple_module(model, v), cap)) for v in model.vertices)
    if any(d is None for _, d in per_simple):
        value = None
    else:
        value = max((d for _, d in per_simple), default=0)
    logger.info("gl.dim %s = %s", model.name or "algebra", value if value is not None else f">={cap}")
    return GlobalDimension(value, cap, per_simple)


# -----------------------------
# Cartan and Coxeter data
# -----------------------------

def cartan_matrix(model: FiniteAlgebraModel, order: Optional[Sequence[str]] = None) -> List[List[int]]:
    """C[i][j] = number of normal words from vertex j to vertex i."""
    vertices = list(order) if order is not None else list(model.vertices)
    return [[len(model.corner(i, j)) for j in vertices] for i in vertices]


def coxeter_matrix(model: FiniteAlgebraModel, order: Optional[Sequence[str]] = None) -> DomainMatrix:
    c = matrix(cartan_matrix(model, order))
    if det(c) == 0:
        raise SingularCartanError("Cartan matrix is singular", {"cartan": cartan_matrix(model, order)})
    return neg(matmul(transpose(inverse(c)), c))


def coxeter_polynomial(model: FiniteAlgebraModel, order: Optional[Sequence[str]] = None) -> sympy.Poly:
    t = sympy.Symbol("t")
    coeffs = charpoly(coxeter_matrix(model, order))
    if any(c.denominator != 1 for c in coeffs):
        raise SingularCartanError("Coxeter polynomial has non-integer coefficients", {"coefficients": [str(c) for c in coeffs]})
    return sympy.Poly([int(c) for c in coeffs], t)


def cartan_determinant(model: FiniteAlgebraModel) -> Fraction:
    return det(matrix(cartan_matrix(model)))
