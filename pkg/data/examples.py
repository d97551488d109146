# data/examples.py  (bundled documents; cached, shared)
from __future__ import annotations
from functools import lru_cache
from typing import Optional, Tuple

from adapters.documents import load_algebra, load_dimer, load_qp, read_text
from algebra.pathalg import PresentedGradedAlgebra, Quiver
from config.settings import EXAMPLE_DOCUMENTS
from constructions.dimer import DimerGraph
from constructions.qp import Potential


def example_names() -> Tuple[str, ...]:
    return tuple(sorted(EXAMPLE_DOCUMENTS))


def example_kind(name: str) -> str:
    return EXAMPLE_DOCUMENTS[name][0]


@lru_cache(maxsize=None)
def load_example_qp(name: str) -> Tuple[Quiver, Potential, Optional[Tuple[str, ...]], str]:
    text, _ = read_text(f"@{name}")
    return load_qp(text)


@lru_cache(maxsize=None)
def load_example_dimer(name: str) -> DimerGraph:
    text, _ = read_text(f"@{name}")
    return load_dimer(text)


@lru_cache(maxsize=None)
def load_example_algebra(name: str) -> PresentedGradedAlgebra:
    text, _ = read_text(f"@{name}")
    return load_algebra(text)
