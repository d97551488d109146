"""
Iterates of the inverse n-shifted Serre functor on the algebra.

One step takes a bounded complex X of left projectives to RHom(DX, L)[n]: the
dual complex of right modules is resolved by right projectives, Hom(-, L) turns
these back into left projectives, and the result is shifted and minimalized.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from algebra.pathalg import AlgebraInputError
from config.logger import logger
from config.settings import DEFAULT_RESOLUTION_CAP, DEFAULT_SERRE_ITERATIONS
from repthy.complexes import ProjComplex, dual_complex, hom_to_algebra, minimalize, realize, resolve, stalk
from repthy.homological import GlobalDimension, global_dimension
from repthy.model import FiniteAlgebraModel


class SerreRefusal(AlgebraInputError):
    pass


@dataclass(frozen=True)
class IterateReport:
    level: int
    homology: Dict[int, Tuple[int, ...]]
    ranks: Dict[int, int] = field(default_factory=dict)

    @property
    def concentrated(self) -> bool:
        return set(self.homology) <= {0}

    @property
    def degree_zero_total(self) -> int:
        return sum(self.homology.get(0, ()))

    def as_dict(self) -> Dict[str, object]:
        return {
            "level": self.level,
            "homology": {str(j): list(v) for j, v in sorted(self.homology.items())},
            "concentrated_in_degree_zero": self.concentrated,
            "ranks": {str(k): r for k, r in self.ranks.items()},
        }


def inverse_serre_step(x: ProjComplex, n: int, cap: int = DEFAULT_RESOLUTION_CAP) -> ProjComplex:
    resolved = resolve(dual_complex(realize(x)), cap)
    if not resolved.complete:
        raise SerreRefusal("resolution of the dual complex did not terminate", {"cap": cap})
    return minimalize(hom_to_algebra(resolved.complex).shift(n))


def _require_gldim(model: FiniteAlgebraModel, n: int, cap: int) -> GlobalDimension:
    gldim = global_dimension(model, cap)
    if not gldim.is_finite or gldim.value > n:
        raise SerreRefusal(
            f"global dimension {gldim.value if gldim.is_finite else f'>={cap}'} exceeds n={n}",
            gldim.as_dict(),
        )
    return gldim


def serre_inverse_iterate(
    model: FiniteAlgebraModel,
    n: int,
    levels: int = DEFAULT_SERRE_ITERATIONS,
    cap: int = DEFAULT_RESOLUTION_CAP,
) -> List[IterateReport]:
    """Homology dimension vectors of S_n^{-l}(L) for l = 0..levels."""
    _require_gldim(model, n, cap)
    return _iterates(model, n, levels, cap)


def _iterates(model: FiniteAlgebraModel, n: int, levels: int, cap: int) -> List[IterateReport]:
    x = stalk(model)
    reports = [IterateReport(0, x.homology_vectors(), x.ranks())]
    for level in range(1, levels + 1):
        x = inverse_serre_step(x, n, cap)
        report = IterateReport(level, x.homology_vectors(), x.ranks())
        logger.info("S_%d^-%d: homology in degrees %s", n, level, sorted(report.homology))
        reports.append(report)
    return reports


@dataclass(frozen=True)
class RepresentationInfiniteReport:
    n: int
    global_dimension: GlobalDimension
    iterates: Tuple[IterateReport, ...]

    @property
    def verdict(self) -> bool:
        gldim = self.global_dimension
        if not gldim.is_finite or gldim.value > self.n:
            return False
        return all(it.concentrated for it in self.iterates)

    def as_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "global_dimension": self.global_dimension.as_dict(),
            "iterates": [it.as_dict() for it in self.iterates],
            "representation_infinite_up_to_cap": self.verdict,
        }


def is_representation_infinite(
    model: FiniteAlgebraModel,
    n: int,
    levels: int = DEFAULT_SERRE_ITERATIONS,
    cap: int = DEFAULT_RESOLUTION_CAP,
) -> RepresentationInfiniteReport:
    gldim = global_dimension(model, cap)
    if not gldim.is_finite or gldim.value > n:
        logger.warning("gl.dim of %s exceeds %d; not representation-infinite in that dimension", model.name or "algebra", n)
        return RepresentationInfiniteReport(n, gldim, ())
    return RepresentationInfiniteReport(n, gldim, tuple(_iterates(model, n, levels, cap)))
