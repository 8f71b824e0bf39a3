"""Pydantic request/response models shared by the HTTP service and the CLI.

Rationals cross this boundary as strings ("p/q" or an integer literal)
so no precision is lost; validators reject anything a Fraction cannot
parse.  Response models fix the field order, which keeps the JSON
emitted for identical requests byte-identical.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

SUITE_NAMES = (
    "algebra-axioms",
    "cayley-identities",
    "proposition",
    "chiral",
    "factorization",
    "massless",
    "dispersion",
)

SuiteName = Literal[
    "all",
    "algebra-axioms",
    "cayley-identities",
    "proposition",
    "chiral",
    "factorization",
    "massless",
    "dispersion",
]
SourceName = Literal["paper", "derived", "both"]
FormatName = Literal["json", "text", "csv"]


def _parse_rational(value: str, field: str) -> Fraction:
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational 'p/q': {value!r}") from exc


class GeometryMixin(BaseModel):
    n: Optional[int] = Field(default=None, description="lattice dimension")
    h: str = Field(default="1", description="meshwidth as rational 'p/q'")

    @field_validator("h")
    @classmethod
    def _h_positive_rational(cls, value: str) -> str:
        if _parse_rational(value, "h") <= 0:
            raise ValueError(f"h must be positive, got {value!r}")
        return value

    def h_fraction(self) -> Fraction:
        return Fraction(self.h)


class MassMixin(GeometryMixin):
    m: str = Field(default="1/2", description="mass as rational 'p/q'")
    omega: list[str] = Field(default=["1"], description="unit frame components")

    @field_validator("m")
    @classmethod
    def _m_rational(cls, value: str) -> str:
        _parse_rational(value, "m")
        return value

    @field_validator("omega")
    @classmethod
    def _omega_on_sphere(cls, value: list[str]) -> list[str]:
        if not value:
            raise ValueError("needs at least one component")
        components = [_parse_rational(w, "omega") for w in value]
        total = sum(w * w for w in components)
        if total != 1:
            raise ValueError(
                f"components must satisfy sum of squares = 1, got {total}"
            )
        return [str(Fraction(w)) for w in value]

    @model_validator(mode="after")
    def _dimension_consistent(self):
        if self.n is None:
            self.n = len(self.omega)
        elif self.n != len(self.omega):
            raise ValueError(
                f"n: dimension {self.n} does not match omega with {len(self.omega)} components"
            )
        return self

    def m_fraction(self) -> Fraction:
        return Fraction(self.m)

    def omega_fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(w) for w in self.omega)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

class SolveRequest(MassMixin):
    source: Literal["paper", "derived"] = "derived"


class FactorModel(BaseModel):
    axis: int
    v: str
    u: str
    phi: str
    t: Optional[str] = None  # None marks the point at infinity
    z: str
    provenance: str
    on_positive_branch: bool


class SolveResponse(BaseModel):
    version: str
    n: int
    h: str
    m: str
    omega: list[str]
    source: str
    factors: list[FactorModel]


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

class VerifyRequest(MassMixin):
    """Run configuration for the audit suites."""

    suites: list[SuiteName] = Field(default=["all"])
    source: SourceName = "derived"
    box: int = Field(default=3, description="audit box half-width (lattice units)")
    grid: int = Field(default=64, description="zone grid density for dispersion")
    seed: int = Field(default=0, description="seed for randomized sweeps")

    @field_validator("box")
    @classmethod
    def _box_at_least_radius(cls, value: int) -> int:
        if value < 1:
            raise ValueError("half-width must be >= 1 (the stencil radius)")
        return value

    @field_validator("grid")
    @classmethod
    def _grid_bound(cls, value: int) -> int:
        if value < 8:
            raise ValueError("density must be >= 8")
        return value

    @field_validator("seed")
    @classmethod
    def _seed_bound(cls, value: int) -> int:
        if value < 0:
            raise ValueError("must be >= 0")
        return value

    def selected_suites(self) -> tuple[str, ...]:
        if "all" in self.suites:
            return SUITE_NAMES
        seen: list[str] = []
        for name in self.suites:
            if name not in seen:
                seen.append(name)
        return tuple(seen)


class AuditReportModel(BaseModel):
    claim: str
    params: dict[str, str]
    residual_max: Optional[str] = None
    verdict: str
    witness: Optional[dict] = None


class SuiteReportModel(BaseModel):
    version: str
    config: dict
    reports: list[AuditReportModel]
    overall: str


# ---------------------------------------------------------------------------
# stencil
# ---------------------------------------------------------------------------

StencilOp = Literal["forward", "backward", "dirac", "laplacian", "dirac-squared"]


class StencilRequest(GeometryMixin):
    op: StencilOp = "dirac"
    axis: int = Field(default=1, description="axis for forward/backward differences")

    @model_validator(mode="after")
    def _defaults(self):
        if self.n is None:
            self.n = 1
        if not 1 <= self.axis <= self.n:
            raise ValueError(f"axis: {self.axis} out of range 1..{self.n}")
        return self


class TapModel(BaseModel):
    offset: list[int]
    coeff: str


class StencilResponse(BaseModel):
    version: str
    op: str
    n: int
    h: str
    taps: list[TapModel]


# ---------------------------------------------------------------------------
# cayley
# ---------------------------------------------------------------------------

class CayleyRequest(GeometryMixin):
    t: str = Field(description="rational parameter of z = t e_axis e_{n+axis}")
    axis: int = 1

    @field_validator("t")
    @classmethod
    def _t_rational(cls, value: str) -> str:
        _parse_rational(value, "t")
        return value

    @model_validator(mode="after")
    def _defaults(self):
        if self.n is None:
            self.n = 1
        if not 1 <= self.axis <= self.n:
            raise ValueError(f"axis: {self.axis} out of range 1..{self.n}")
        return self

    def t_fraction(self) -> Fraction:
        return Fraction(self.t)


class CayleyResponse(BaseModel):
    version: str
    n: int
    axis: int
    t: str
    z: str
    phi: str
    v: str
    u: str
    on_pseudo_sphere: bool
    on_positive_branch: bool


# ---------------------------------------------------------------------------
# dispersion
# ---------------------------------------------------------------------------

class DispersionRequest(GeometryMixin):
    variant: Literal["sine", "tangent"] = "sine"
    m: float = 0.5
    grid: int = 64

    @field_validator("variant", mode="before")
    @classmethod
    def _accept_tan_alias(cls, value):
        return "tangent" if value == "tan" else value

    @field_validator("grid")
    @classmethod
    def _grid_bound(cls, value: int) -> int:
        if value < 8:
            raise ValueError("density must be >= 8")
        return value

    @model_validator(mode="after")
    def _defaults(self):
        if self.n is None:
            self.n = 1
        return self


class DispersionResponse(BaseModel):
    version: str
    variant: str
    m: float
    h: str
    n: int
    grid: int
    min_abs_residual: float
    argmin: list[float]
    brackets: list[list[list[float]]]
    zero_touches: list[list[float]]
    has_root: bool


class VersionResponse(BaseModel):
    name: str
    version: str
