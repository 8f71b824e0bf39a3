"""Discrete multivector calculus on the lattice h*Z^n.

Translation-invariant operators are finitely supported stencils of
left-multiplier coefficients:  (L f)(x) = sum_o coeff(o) * f(x + h*o).
Because the coefficients do not depend on x, composition is the exact
convolution of tap tables, which makes operator identities (such as the
square of the Dirac stencil against the star-Laplacian) decidable
tap-by-tap in rational arithmetic.

The sign-modulated pseudoscalar field chi(x) is x-dependent and is kept
as a field that multiplies pointwise, never as a stencil.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Optional

from .clifford import (
    AlgebraError,
    Multivector,
    Rational,
    Signature,
    SignatureMismatch,
    as_fraction,
    pseudoscalar,
    split_signature,
)

Offset = tuple[int, ...]
Point = tuple[int, ...]


@dataclass(frozen=True)
class LatticeGeometry:
    """Dimension n and rational meshwidth h > 0.

    Lattice points are stored as integer multiples k of h, so the
    exponents x_j / h appearing in closed-form solutions are exact
    integers by construction.
    """

    n: int
    h: Fraction

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("lattice dimension must be >= 1")
        object.__setattr__(self, "h", as_fraction(self.h))
        if self.h <= 0:
            raise ValueError("meshwidth must be positive")

    @property
    def sig(self) -> Signature:
        return split_signature(self.n)

    def unit_offset(self, j: int, direction: int = 1) -> Offset:
        if not 1 <= j <= self.n:
            raise ValueError(f"axis {j} out of range 1..{self.n}")
        return tuple(direction if i == j - 1 else 0 for i in range(self.n))

    def coordinate(self, k: Point) -> tuple[Fraction, ...]:
        """Physical coordinates x = h*k."""
        return tuple(self.h * ki for ki in k)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box of lattice points, bounds inclusive."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        if len(self.lo) != len(self.hi):
            raise ValueError("box bounds must have equal dimension")
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"empty box {self.lo}..{self.hi}")

    @classmethod
    def centered(cls, n: int, radius: int) -> "Box":
        if radius < 0:
            raise ValueError("radius must be >= 0")
        return cls((-radius,) * n, (radius,) * n)

    @property
    def n(self) -> int:
        return len(self.lo)

    def points(self) -> Iterator[Point]:
        yield from itertools.product(
            *(range(l, h + 1) for l, h in zip(self.lo, self.hi))
        )

    def point_count(self) -> int:
        count = 1
        for l, h in zip(self.lo, self.hi):
            count *= h - l + 1
        return count

    def contains(self, k: Point) -> bool:
        return all(l <= ki <= h for l, ki, h in zip(self.lo, k, self.hi))

    def shrink(self, radii: tuple[int, ...]) -> "Box":
        lo = tuple(l + r for l, r in zip(self.lo, radii))
        hi = tuple(h - r for h, r in zip(self.hi, radii))
        return Box(lo, hi)


class LatticeField:
    """Multivector-valued function on the lattice.

    Backed either by a closed-form evaluator (defined on every point,
    box is None) or by a finite box of values.  Evaluation outside a
    boxed field's domain raises.
    """

    __slots__ = ("geometry", "_eval", "box")

    def __init__(
        self,
        geometry: LatticeGeometry,
        evaluator: Callable[[Point], Multivector],
        box: Optional[Box] = None,
    ):
        self.geometry = geometry
        self._eval = evaluator
        self.box = box

    @classmethod
    def constant(cls, geometry: LatticeGeometry, value: Multivector) -> "LatticeField":
        if value.sig != geometry.sig:
            raise SignatureMismatch("field value signature does not match geometry")
        return cls(geometry, lambda k: value)

    @classmethod
    def from_values(
        cls, geometry: LatticeGeometry, values: Mapping[Point, Multivector], box: Box
    ) -> "LatticeField":
        table = dict(values)

        def evaluator(k: Point) -> Multivector:
            return table[k]

        return cls(geometry, evaluator, box)

    def at(self, k: Point) -> Multivector:
        if len(k) != self.geometry.n:
            raise ValueError(f"point {k} has wrong dimension")
        if not all(isinstance(ki, int) for ki in k):
            raise ValueError(f"point {k} is not on the lattice")
        if self.box is not None and not self.box.contains(k):
            raise ValueError(f"point {k} outside field box {self.box.lo}..{self.box.hi}")
        return self._eval(tuple(k))

    def multiply_left(self, factor) -> "LatticeField":
        """Pointwise left multiplication by a multivector or another field."""
        if isinstance(factor, Multivector):
            return LatticeField(self.geometry, lambda k: factor * self._eval(k), self.box)
        if isinstance(factor, LatticeField):
            box = _intersect_boxes(self.box, factor.box)
            return LatticeField(
                self.geometry, lambda k: factor.at(k) * self.at(k), box
            )
        raise TypeError("factor must be a Multivector or LatticeField")

    def __add__(self, other: "LatticeField") -> "LatticeField":
        box = _intersect_boxes(self.box, other.box)
        return LatticeField(self.geometry, lambda k: self.at(k) + other.at(k), box)

    def __sub__(self, other: "LatticeField") -> "LatticeField":
        box = _intersect_boxes(self.box, other.box)
        return LatticeField(self.geometry, lambda k: self.at(k) - other.at(k), box)

    def reflected(self) -> "LatticeField":
        """The field k -> f(-k)."""
        box = None
        if self.box is not None:
            box = Box(tuple(-h for h in self.box.hi), tuple(-l for l in self.box.lo))
        return LatticeField(
            self.geometry, lambda k: self._eval(tuple(-ki for ki in k)), box
        )

    def values_on(self, box: Box) -> dict[Point, Multivector]:
        return {k: self.at(k) for k in box.points()}

    def equals_on(self, other: "LatticeField", box: Box) -> bool:
        return all(self.at(k) == other.at(k) for k in box.points())


def _intersect_boxes(a: Optional[Box], b: Optional[Box]) -> Optional[Box]:
    if a is None:
        return b
    if b is None:
        return a
    return Box(
        tuple(max(x, y) for x, y in zip(a.lo, b.lo)),
        tuple(min(x, y) for x, y in zip(a.hi, b.hi)),
    )


class OperatorStencil:
    """Finite tap table offset -> left multiplier; immutable."""

    __slots__ = ("geometry", "_taps")

    def __init__(self, geometry: LatticeGeometry, taps: Mapping[Offset, Multivector]):
        clean: dict[Offset, Multivector] = {}
        for offset, coeff in taps.items():
            if len(offset) != geometry.n:
                raise ValueError(f"offset {offset} has wrong dimension")
            if coeff.sig != geometry.sig:
                raise SignatureMismatch("tap coefficient signature mismatch")
            if not coeff.is_zero():
                clean[tuple(offset)] = coeff
        self.geometry = geometry
        self._taps = clean

    @classmethod
    def identity(cls, geometry: LatticeGeometry) -> "OperatorStencil":
        return cls(geometry, {(0,) * geometry.n: Multivector.one(geometry.sig)})

    @classmethod
    def multiplier(cls, geometry: LatticeGeometry, coeff: Multivector) -> "OperatorStencil":
        return cls(geometry, {(0,) * geometry.n: coeff})

    def taps(self) -> dict[Offset, Multivector]:
        return dict(self._taps)

    def tap(self, offset: Offset) -> Multivector:
        return self._taps.get(tuple(offset), Multivector.zero(self.geometry.sig))

    def offsets(self) -> list[Offset]:
        return sorted(self._taps)

    def radius(self) -> tuple[int, ...]:
        """Per-axis reach; a boxed field shrinks by this much when applied."""
        if not self._taps:
            return (0,) * self.geometry.n
        return tuple(
            max(abs(o[axis]) for o in self._taps) for axis in range(self.geometry.n)
        )

    def is_zero(self) -> bool:
        return not self._taps

    def max_abs_coefficient(self) -> Fraction:
        if not self._taps:
            return Fraction(0)
        return max(c.max_abs_coefficient() for c in self._taps.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorStencil):
            return NotImplemented
        return self.geometry == other.geometry and self._taps == other._taps

    def __hash__(self) -> int:
        return hash((self.geometry, frozenset(self._taps.items())))

    def __add__(self, other: "OperatorStencil") -> "OperatorStencil":
        self._check_geometry(other)
        out = dict(self._taps)
        for offset, coeff in other._taps.items():
            existing = out.get(offset)
            out[offset] = coeff if existing is None else existing + coeff
        return OperatorStencil(self.geometry, out)

    def __sub__(self, other: "OperatorStencil") -> "OperatorStencil":
        return self + (-other)

    def __neg__(self) -> "OperatorStencil":
        return OperatorStencil(self.geometry, {o: -c for o, c in self._taps.items()})

    def scale(self, factor: Rational) -> "OperatorStencil":
        f = as_fraction(factor)
        return OperatorStencil(self.geometry, {o: c * f for o, c in self._taps.items()})

    def compose(self, other: "OperatorStencil") -> "OperatorStencil":
        """self after other: taps[o] = sum_{o1+o2=o} coeff_self(o1) * coeff_other(o2)."""
        self._check_geometry(other)
        out: dict[Offset, Multivector] = {}
        for o1, c1 in self._taps.items():
            for o2, c2 in other._taps.items():
                offset = tuple(x + y for x, y in zip(o1, o2))
                product = c1 * c2
                existing = out.get(offset)
                out[offset] = product if existing is None else existing + product
        return OperatorStencil(self.geometry, out)

    def apply(self, field: LatticeField) -> LatticeField:
        if field.geometry != self.geometry:
            raise ValueError("stencil and field geometries differ")
        taps = list(self._taps.items())
        zero = Multivector.zero(self.geometry.sig)

        def evaluator(k: Point) -> Multivector:
            total = zero
            for offset, coeff in taps:
                total = total + coeff * field.at(
                    tuple(ki + oi for ki, oi in zip(k, offset))
                )
            return total

        box = None
        if field.box is not None:
            box = field.box.shrink(self.radius())
        return LatticeField(self.geometry, evaluator, box)

    def _check_geometry(self, other: "OperatorStencil") -> None:
        if other.geometry != self.geometry:
            raise ValueError("stencil geometries differ")


def stencil_compose(first: OperatorStencil, second: OperatorStencil) -> OperatorStencil:
    """Composition: apply second, then first."""
    return first.compose(second)


# ---------------------------------------------------------------------------
# the operators
# ---------------------------------------------------------------------------

def diff_stencil(geometry: LatticeGeometry, j: int, direction: str) -> OperatorStencil:
    """Forward/backward divided difference along axis j."""
    one = Multivector.one(geometry.sig)
    inv_h = Fraction(1) / geometry.h
    zero_offset = (0,) * geometry.n
    if direction == "forward":
        taps = {geometry.unit_offset(j): one * inv_h, zero_offset: one * -inv_h}
    elif direction == "backward":
        taps = {zero_offset: one * inv_h, geometry.unit_offset(j, -1): one * -inv_h}
    else:
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")
    return OperatorStencil(geometry, taps)


def dirac_stencil(geometry: LatticeGeometry) -> OperatorStencil:
    """Split-signature Dirac stencil.

    Per axis j:  e_j carries the central difference and e_{n+j} the
    second-difference defect, i.e. taps
        +e_j : (e_j - e_{n+j}) / 2h
        -e_j : (-e_j - e_{n+j}) / 2h
         0   : e_{n+j} / h   (accumulated over axes)
    """
    sig = geometry.sig
    n = geometry.n
    half = Fraction(1, 2) / geometry.h
    taps: dict[Offset, Multivector] = {}
    zero_offset = (0,) * n
    center = Multivector.zero(sig)
    for j in range(1, n + 1):
        ej = Multivector.generator(sig, j)
        enj = Multivector.generator(sig, n + j)
        taps[geometry.unit_offset(j)] = (ej - enj) * half
        taps[geometry.unit_offset(j, -1)] = (-ej - enj) * half
        center = center + enj * (Fraction(1) / geometry.h)
    taps[zero_offset] = center
    return OperatorStencil(geometry, taps)


def laplacian_stencil(geometry: LatticeGeometry) -> OperatorStencil:
    """Star-Laplacian: per axis taps (1, -2, 1) / h^2."""
    total: Optional[OperatorStencil] = None
    for j in range(1, geometry.n + 1):
        part = axis_laplacian_stencil(geometry, j)
        total = part if total is None else total + part
    assert total is not None
    return total


def axis_laplacian_stencil(geometry: LatticeGeometry, j: int) -> OperatorStencil:
    """One-axis second difference (backward after forward along axis j)."""
    return diff_stencil(geometry, j, "backward").compose(
        diff_stencil(geometry, j, "forward")
    )


@dataclass(frozen=True)
class MassVector:
    """Mass m and a rational unit frame omega with sum(omega_j^2) = 1."""

    m: Fraction
    omega: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", as_fraction(self.m))
        object.__setattr__(self, "omega", tuple(as_fraction(w) for w in self.omega))
        if not self.omega:
            raise ValueError("omega must have at least one component")
        if sum(w * w for w in self.omega) != 1:
            raise ValueError(
                f"omega {self.omega} is not on the unit sphere (sum of squares != 1)"
            )

    @property
    def n(self) -> int:
        return len(self.omega)

    def omega_vector(self, geometry: LatticeGeometry) -> Multivector:
        """The 1-vector sum(omega_j e_{n+j}); squares to +1 exactly."""
        self._check_geometry(geometry)
        sig = geometry.sig
        return Multivector(
            sig,
            {sig.generator_mask(geometry.n + j): w for j, w in enumerate(self.omega, start=1)},
        )

    def mass_multiplier(self, geometry: LatticeGeometry) -> Multivector:
        """Left multiplier m * omega used in the eigenvalue equation."""
        return self.omega_vector(geometry) * self.m

    def _check_geometry(self, geometry: LatticeGeometry) -> None:
        if geometry.n != self.n:
            raise ValueError(
                f"mass frame has {self.n} components but lattice dimension is {geometry.n}"
            )


def mass_operator(mass: MassVector, geometry: LatticeGeometry) -> OperatorStencil:
    """The multiplication operator f -> (m omega) f as a one-tap stencil."""
    return OperatorStencil.multiplier(geometry, mass.mass_multiplier(geometry))


def m_h_vector(mass: MassVector, geometry: LatticeGeometry) -> Multivector:
    """sum_j (m omega_j - 1/h) e_{n+j}."""
    mass._check_geometry(geometry)
    sig = geometry.sig
    inv_h = Fraction(1) / geometry.h
    return Multivector(
        sig,
        {
            sig.generator_mask(geometry.n + j): mass.m * w - inv_h
            for j, w in enumerate(mass.omega, start=1)
        },
    )


def chi_field(geometry: LatticeGeometry) -> LatticeField:
    """chi(x) = (-1)^(sum_j x_j/h) * gamma, with gamma the pseudoscalar."""
    gamma = pseudoscalar(geometry.n)

    def evaluator(k: Point) -> Multivector:
        return -gamma if sum(k) & 1 else gamma

    return LatticeField(geometry, evaluator)


def chi_at(geometry: LatticeGeometry, k: Point) -> Multivector:
    return chi_field(geometry).at(k)


def chi_conjugate(field: LatticeField) -> LatticeField:
    """Pointwise g(x) = chi(x) * f(x)."""
    return field.multiply_left(chi_field(field.geometry))


# ---------------------------------------------------------------------------
# exact residual evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualWitness:
    point: Point
    blade_mask: int
    value: Fraction


@dataclass(frozen=True)
class ResidualSummary:
    """Exact residual of (L f - extra*f) over a box of points."""

    values: dict[Point, Multivector]
    max_abs: Fraction
    witness: Optional[ResidualWitness]

    @property
    def is_zero(self) -> bool:
        return self.max_abs == 0

    def point_rows(self) -> list[tuple[Point, Fraction]]:
        """Per-point max |coefficient| in box iteration order."""
        return [(k, v.max_abs_coefficient()) for k, v in self.values.items()]


def residual_field(
    stencil: OperatorStencil,
    extra: Optional[Multivector],
    field: LatticeField,
    box: Box,
) -> ResidualSummary:
    """Evaluate L f - extra * f exactly on every point of the box.

    Raises if the box (widened by the stencil radius) leaves a boxed
    field's domain.
    """
    if box.n != stencil.geometry.n:
        raise ValueError("box dimension does not match geometry")
    if field.box is not None:
        needed = Box(
            tuple(l - r for l, r in zip(box.lo, stencil.radius())),
            tuple(h + r for h, r in zip(box.hi, stencil.radius())),
        )
        if not (
            field.box.contains(needed.lo) and field.box.contains(needed.hi)
        ):
            raise AlgebraError(
                f"residual box {box.lo}..{box.hi} exceeds the field's safe interior"
            )
    applied = stencil.apply(field)
    values: dict[Point, Multivector] = {}
    max_abs = Fraction(0)
    witness: Optional[ResidualWitness] = None
    for k in box.points():
        value = applied.at(k)
        if extra is not None:
            value = value - extra * field.at(k)
        values[k] = value
        for mask, coeff in value.terms():
            magnitude = abs(coeff)
            if magnitude > max_abs:
                max_abs = magnitude
                witness = ResidualWitness(k, mask, coeff)
    return ResidualSummary(values, max_abs, witness)
