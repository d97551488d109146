from fractions import Fraction
from typing import Optional, Dict, Any, List

from pydantic import BaseModel, Field, field_validator


def parse_rational(value: Any) -> str:
    try:
        parsed = Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc
    return str(parsed)


class ArrowDoc(BaseModel):
    """One arrow of a quiver."""
    name: str = Field(..., description="Arrow name, unique within the quiver")
    source: str = Field(..., description="Vertex the arrow starts at")
    target: str = Field(..., description="Vertex the arrow ends at")
    degree: int = Field(0, description="Grading degree of the arrow")

    class Config:
        extra = "forbid"


class TermDoc(BaseModel):
    """coefficient * path, the path listed in application order (first-applied arrow first)."""
    coef: str = Field("1", description="Rational coefficient written as an integer or 'p/q'")
    path: List[str] = Field(default_factory=list, description="Arrow names in application order")
    vertex: Optional[str] = Field(None, description="Vertex of a trivial path (used when path is empty)")

    class Config:
        extra = "forbid"

    @field_validator("coef", mode="before")
    @classmethod
    def rational_coef(cls, value: Any) -> str:
        return parse_rational(value)

    @property
    def coefficient(self) -> Fraction:
        return Fraction(self.coef)


class CycleDoc(BaseModel):
    """coefficient * cycle of a potential."""
    coef: str = Field("1", description="Rational coefficient written as an integer or 'p/q'")
    cycle: List[str] = Field(..., min_length=1, description="Arrow names of a cycle in application order")

    class Config:
        extra = "forbid"

    @field_validator("coef", mode="before")
    @classmethod
    def rational_coef(cls, value: Any) -> str:
        return parse_rational(value)

    @property
    def coefficient(self) -> Fraction:
        return Fraction(self.coef)


class AlgebraDocument(BaseModel):
    """A graded quiver with relations."""
    name: str = Field("", description="Display name of the algebra")
    vertices: List[str] = Field(..., description="Vertex names in their canonical order")
    arrows: List[ArrowDoc] = Field(default_factory=list)
    relations: List[List[TermDoc]] = Field(default_factory=list, description="Each relation is a sum of terms")

    class Config:
        extra = "forbid"


class QPDocument(BaseModel):
    """A quiver with potential, optionally with a cut."""
    name: str = Field("", description="Display name")
    vertices: List[str]
    arrows: List[ArrowDoc] = Field(default_factory=list)
    potential: List[CycleDoc] = Field(..., description="Cycles of the potential in application order")
    cut: Optional[List[str]] = Field(None, description="Arrow names of degree 1")

    class Config:
        extra = "forbid"


class EdgeDoc(BaseModel):
    id: str = Field(..., description="Edge id; also the name of the dual arrow")
    white: str
    black: str

    class Config:
        extra = "forbid"


class DimerDocument(BaseModel):
    """Bipartite graph on the torus given by its faces."""
    name: str = Field("", description="Display name")
    white: List[str]
    black: List[str]
    edges: List[EdgeDoc]
    faces: List[List[str]] = Field(
        ..., description="Edge ids counterclockwise around each face, starting with a white-to-black edge"
    )
    face_names: Optional[List[str]] = Field(None, description="Names of the dual quiver vertices")

    class Config:
        extra = "forbid"


class RunReport(BaseModel):
    """What a command printed: the request, a digest of its inputs, the result and a verdict."""
    command: List[str] = Field(..., description="argv echo")
    digest: str = Field(..., description="SHA-256 of the canonical input document and flags")
    result: Dict[str, Any] = Field(default_factory=dict)
    passed: bool = True
    elapsed_ms: float = Field(0.0, description="Wall time; not part of the digest")
