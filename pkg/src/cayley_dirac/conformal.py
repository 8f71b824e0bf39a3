"""Cayley transform, pseudo-sphere planes, and the 2x2 Vahlen calculus.

The Cayley map phi(w) = (1+w)(1-w)^{-1} restricted to a coordinate
2-vector plane R*e_j*e_{n+j} of Cl(n,n) lands on the hyperbola branch
v^2 - u^2 = 1 inside span{1, e_j e_{n+j}}; its rational parametrization
and exact identities are audited here.  Vahlen matrices carry the
fractional-linear (Moebius) action (a z + b)(c z + d)^{-1} with Clifford
entries, treated projectively.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .clifford import (
    AlgebraError,
    Multivector,
    Rational,
    Signature,
    SignatureMismatch,
    as_fraction,
    embed,
    inverse,
    split_signature,
    try_inverse,
)


class TransformPole(AlgebraError):
    """The requested map is evaluated at a pole (image at infinity)."""


class PointAtInfinity:
    """Distinguished Moebius image for a singular denominator."""

    _instance: Optional["PointAtInfinity"] = None

    def __new__(cls) -> "PointAtInfinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "PointAtInfinity"


AT_INFINITY = PointAtInfinity()
MobiusImage = Union[Multivector, PointAtInfinity]


@lru_cache(maxsize=None)
def _check_plane_blade(n: int, axis: int) -> int:
    """Mask of e_axis e_{n+axis}; verifies it squares to +1 once per (n, axis)."""
    sig = split_signature(n)
    if not 1 <= axis <= n:
        raise ValueError(f"axis {axis} out of range 1..{n}")
    blade = Multivector.generator(sig, axis) * Multivector.generator(sig, n + axis)
    if blade * blade != 1:
        raise AlgebraError("plane blade does not square to +1")
    (mask,) = blade.support()
    return mask


def plane_blade(n: int, axis: int) -> Multivector:
    """The commuting-plane generator e_axis e_{n+axis} of Cl(n,n)."""
    mask = _check_plane_blade(n, axis)
    return Multivector(split_signature(n), {mask: 1})


@dataclass(frozen=True)
class Spin2Vector:
    """z = t * e_axis e_{n+axis}, a point of the coordinate 2-vector line."""

    n: int
    axis: int
    t: Fraction

    def __post_init__(self) -> None:
        _check_plane_blade(self.n, self.axis)
        object.__setattr__(self, "t", as_fraction(self.t))

    @property
    def degenerate(self) -> bool:
        """True at the Cayley poles t = +-1 (z^2 = 1)."""
        return self.t * self.t == 1

    def to_multivector(self) -> Multivector:
        return plane_blade(self.n, self.axis) * self.t


@dataclass(frozen=True)
class PlaneParavector:
    """v + u * e_axis e_{n+axis}  in span{1, e_axis e_{n+axis}}."""

    n: int
    axis: int
    v: Fraction
    u: Fraction

    def __post_init__(self) -> None:
        _check_plane_blade(self.n, self.axis)
        object.__setattr__(self, "v", as_fraction(self.v))
        object.__setattr__(self, "u", as_fraction(self.u))

    @property
    def on_pseudo_sphere(self) -> bool:
        return self.v * self.v - self.u * self.u == 1

    @property
    def on_positive_branch(self) -> bool:
        """Branch membership v > 0 (reported, never enforced)."""
        return self.v > 0

    def to_multivector(self) -> Multivector:
        mv = plane_blade(self.n, self.axis) * self.u
        return mv + self.v


def cayley(w: Multivector) -> Multivector:
    """(1 + w)(1 - w)^{-1}; raises TransformPole when 1 - w is singular."""
    denom = try_inverse(1 - w)
    if denom is None:
        raise TransformPole("Cayley pole: 1 - w is singular")
    return (1 + w) * denom


def cayley_identity_residuals(
    w: Multivector,
) -> tuple[Multivector, Multivector, Multivector]:
    """Exact residuals of the three Cayley-map identities.

    r1 = (phi + phi^-1) - 2(1 + w^2)(1 - w^2)^-1
    r2 = (phi - phi^-1) - 4w(1 - w^2)^-1
    r3 = w(phi + phi^-1 + 2) - (phi - phi^-1)

    All three vanish exactly whenever w^2 != 1 and the intermediates are
    invertible.
    """
    phi = cayley(w)
    phi_inv = inverse(phi)
    w2 = w * w
    inv_1mw2 = try_inverse(1 - w2)
    if inv_1mw2 is None:
        raise TransformPole("1 - w^2 is singular")
    plus = phi + phi_inv
    minus = phi - phi_inv
    r1 = plus - 2 * (1 + w2) * inv_1mw2
    r2 = minus - 4 * w * inv_1mw2
    r3 = w * (plus + 2) - minus
    return r1, r2, r3


def stereographic(z: Spin2Vector) -> PlaneParavector:
    """Map t e to (v, u) = ((1+t^2)/(1-t^2), 2t/(1-t^2)); v^2 - u^2 = 1."""
    t = z.t
    denom = 1 - t * t
    if not denom:
        raise TransformPole(f"stereographic pole at t = {t}")
    return PlaneParavector(z.n, z.axis, (1 + t * t) / denom, 2 * t / denom)


def inverse_stereographic(p: PlaneParavector) -> Spin2Vector:
    """Recover t = u/(1+v); exact round-trip with `stereographic`."""
    if not p.on_pseudo_sphere:
        raise AlgebraError("inverse_stereographic requires v^2 - u^2 = 1")
    if p.v == -1:
        raise TransformPole("point at infinity: v = -1")
    return Spin2Vector(p.n, p.axis, p.u / (1 + p.v))


# ---------------------------------------------------------------------------
# Vahlen matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VahlenCertificate:
    """Outcome of the certification checks on a 2x2 Clifford matrix."""

    products_in_vector_space: dict[str, bool]
    pseudo_det_real_nonzero: bool

    @property
    def certified(self) -> bool:
        return self.pseudo_det_real_nonzero and all(
            self.products_in_vector_space.values()
        )


@dataclass(frozen=True)
class VahlenMatrix:
    """2x2 matrix over a Clifford algebra, acting projectively by Moebius maps."""

    a: Multivector
    b: Multivector
    c: Multivector
    d: Multivector

    def __post_init__(self) -> None:
        sig = self.a.sig
        for entry in (self.b, self.c, self.d):
            if entry.sig != sig:
                raise SignatureMismatch("matrix entries must share a signature")

    @property
    def sig(self) -> Signature:
        return self.a.sig

    @classmethod
    def identity(cls, sig: Signature) -> "VahlenMatrix":
        one = Multivector.one(sig)
        zero = Multivector.zero(sig)
        return cls(one, zero, zero, one)

    @classmethod
    def inversion(cls, sig: Signature) -> "VahlenMatrix":
        """S = (0, 1; -1, 0), the matrix of w -> -w^{-1}."""
        one = Multivector.one(sig)
        zero = Multivector.zero(sig)
        return cls(zero, one, -one, zero)

    @classmethod
    def from_scalars(cls, sig: Signature, a: Rational, b: Rational, c: Rational, d: Rational) -> "VahlenMatrix":
        s = lambda x: Multivector.scalar(sig, x)
        return cls(s(a), s(b), s(c), s(d))

    def scale(self, factor: Rational) -> "VahlenMatrix":
        f = as_fraction(factor)
        return VahlenMatrix(self.a * f, self.b * f, self.c * f, self.d * f)

    def __matmul__(self, other: "VahlenMatrix") -> "VahlenMatrix":
        return VahlenMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def pseudo_det(self) -> Multivector:
        """a d* - b* c (star = reversion)."""
        return self.a * self.d.reversion() - self.b.reversion() * self.c

    def certify(self) -> VahlenCertificate:
        """Check the vector-space membership and pseudo-determinant conditions.

        Clifford-group membership of the entries themselves is not
        decided here; the certificate covers the checkable conditions
        (b d*, a c*, a* b, c* d all 1-vectors, pseudo-determinant a
        nonzero real scalar).
        """
        products = {
            "b*rev(d)": self.b * self.d.reversion(),
            "a*rev(c)": self.a * self.c.reversion(),
            "rev(a)*b": self.a.reversion() * self.b,
            "rev(c)*d": self.c.reversion() * self.d,
        }
        membership = {name: value.is_vector() for name, value in products.items()}
        det = self.pseudo_det()
        return VahlenCertificate(membership, det.is_scalar() and not det.is_zero())

    def h_form_check(self) -> bool:
        """True iff the matrix has the pseudo-sphere-preserving shape.

        Requires c = b', d = a', the scalars a a^dagger - b b^dagger = 1,
        and a b* a 1-vector (the zero element counts).
        """
        if self.c != self.b.main_involution() or self.d != self.a.main_involution():
            return False
        norm_a = self.a * self.a.conjugation()
        norm_b = self.b * self.b.conjugation()
        if not (norm_a.is_scalar() and norm_b.is_scalar()):
            return False
        if norm_a.scalar_part() - norm_b.scalar_part() != 1:
            return False
        return (self.a * self.b.reversion()).is_vector()


def vahlen_to_clifford(matrix: VahlenMatrix, n: int) -> Multivector:
    """Fold a 2x2 matrix over Cl(n-1,n-1) into a single Cl(n,n) element.

    Literal evaluation of
        (1/2) [ (a+d') + (a-d') e_{2n}e_n + (b+c') e_{2n} + (-b+c') ].
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    small = Signature(n - 1, n - 1)
    if matrix.sig != small:
        raise SignatureMismatch(f"expected entries over {small}, got {matrix.sig}")
    big = split_signature(n)
    a = embed(matrix.a, big)
    b = embed(matrix.b, big)
    c = embed(matrix.c, big)
    d = embed(matrix.d, big)
    e_2n = Multivector.generator(big, 2 * n)
    e_n = Multivector.generator(big, n)
    dp = d.main_involution()
    cp = c.main_involution()
    total = (a + dp) + (a - dp) * (e_2n * e_n) + (b + cp) * e_2n + (-b + cp)
    return total * Fraction(1, 2)


def mobius_apply(matrix: VahlenMatrix, z: Multivector) -> MobiusImage:
    """(a z + b)(c z + d)^{-1}; AT_INFINITY when the denominator is singular.

    Entries over a sub-signature are embedded canonically into z's
    algebra, so scalar matrices act on arguments of any dimension.
    """
    if matrix.sig != z.sig:
        a = embed(matrix.a, z.sig)
        b = embed(matrix.b, z.sig)
        c = embed(matrix.c, z.sig)
        d = embed(matrix.d, z.sig)
    else:
        a, b, c, d = matrix.a, matrix.b, matrix.c, matrix.d
    denom = try_inverse(c * z + d)
    if denom is None:
        return AT_INFINITY
    return (a * z + b) * denom
