"""Exact arithmetic in the real Clifford algebra Cl(p,q).

Generators are indexed 1..p+q.  The first p square to -1, the remaining q
square to +1, and distinct generators anticommute.  The split-signature
algebras Cl(n,n) used by the lattice modules put the negative-square
generators first (e_1..e_n) and the positive-square ones after
(e_{n+1}..e_{2n}).

Basis blades are bitmasks: bit i-1 set means generator e_i is a factor,
and the blade is the product of its generators in ascending index order.
Coefficients are `fractions.Fraction` throughout, so identities collapse
to exact zero or fail with an exact witness; there is no floating point
in this module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Union

Rational = Union[int, Fraction, str]

MAX_GENERATORS = 32
# General inverses solve a dense 2^d x 2^d rational system; cap the blowup.
MAX_DENSE_SOLVE_GENERATORS = 10


class AlgebraError(ValueError):
    """Base class for algebraic failures."""


class SignatureMismatch(AlgebraError):
    """Operands live in different algebras."""


class SingularElement(AlgebraError):
    """An inverse was requested for a non-invertible element."""


def as_fraction(value: Rational) -> Fraction:
    """Coerce int/str/Fraction input to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class Signature:
    """Metric signature (p, q): p generators square to -1, q to +1."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0:
            raise ValueError("signature counts must be non-negative")
        if self.p + self.q > MAX_GENERATORS:
            raise ValueError(f"at most {MAX_GENERATORS} generators supported")

    @property
    def generators(self) -> int:
        return self.p + self.q

    @property
    def blade_count(self) -> int:
        return 1 << self.generators

    def generator_square(self, i: int) -> int:
        """Square of generator e_i (+1 or -1); i is 1-based."""
        self._check_index(i)
        return -1 if i <= self.p else 1

    def generator_mask(self, i: int) -> int:
        self._check_index(i)
        return 1 << (i - 1)

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.generators:
            raise ValueError(f"generator index {i} out of range 1..{self.generators}")

    def __str__(self) -> str:
        return f"Cl({self.p},{self.q})"


def split_signature(n: int) -> Signature:
    """The split algebra Cl(n,n) the lattice operators live in."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return Signature(n, n)


# ---------------------------------------------------------------------------
# blade-level helpers (masks are plain ints)
# ---------------------------------------------------------------------------

def blade_indices(mask: int) -> tuple[int, ...]:
    """Ascending 1-based generator indices of a blade mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def blade_grade(mask: int) -> int:
    return mask.bit_count()


def reorder_sign(a: int, b: int) -> int:
    """Parity sign from sorting the concatenation of blades a and b.

    Counts, for every generator of a, the generators of b with strictly
    smaller index that it has to move past; equivalent to a bubble sort
    of the concatenated index sequence.
    """
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_product(sig: Signature, a: int, b: int) -> tuple[int, int]:
    """Geometric product of two basis blades: (result mask, sign)."""
    sign = reorder_sign(a, b)
    negatives = (a & b) & ((1 << sig.p) - 1)
    if negatives.bit_count() & 1:
        sign = -sign
    return a ^ b, sign


def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "".join(f"e{i}" for i in blade_indices(mask))


# ---------------------------------------------------------------------------
# multivectors
# ---------------------------------------------------------------------------

class Multivector:
    """Immutable multivector: map from blade mask to nonzero Fraction.

    All operations are pure; instances may be shared freely across
    threads.  Arithmetic mixes transparently with ints and Fractions.
    """

    __slots__ = ("sig", "_coeffs")

    def __init__(self, sig: Signature, coeffs: Mapping[int, Rational]):
        clean: dict[int, Fraction] = {}
        limit = sig.blade_count
        for mask, value in coeffs.items():
            if not 0 <= mask < limit:
                raise ValueError(f"blade mask {mask} out of range for {sig}")
            frac = as_fraction(value)
            if frac:
                clean[mask] = frac
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "_coeffs", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Multivector is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def scalar(cls, sig: Signature, value: Rational) -> "Multivector":
        return cls(sig, {0: as_fraction(value)})

    @classmethod
    def zero(cls, sig: Signature) -> "Multivector":
        return cls(sig, {})

    @classmethod
    def one(cls, sig: Signature) -> "Multivector":
        return cls.scalar(sig, 1)

    @classmethod
    def generator(cls, sig: Signature, i: int) -> "Multivector":
        return cls(sig, {sig.generator_mask(i): 1})

    @classmethod
    def blade(cls, sig: Signature, indices: Iterable[int], coeff: Rational = 1) -> "Multivector":
        """Blade from ascending distinct generator indices."""
        mask = 0
        last = 0
        for i in indices:
            if i <= last:
                raise ValueError("blade indices must be ascending and distinct")
            mask |= sig.generator_mask(i)
            last = i
        return cls(sig, {mask: as_fraction(coeff)})

    # -- inspection ---------------------------------------------------------

    def coefficient(self, mask: int) -> Fraction:
        return self._coeffs.get(mask, Fraction(0))

    def terms(self) -> Iterator[tuple[int, Fraction]]:
        """Terms in canonical order (by grade, then mask)."""
        for mask in sorted(self._coeffs, key=lambda m: (blade_grade(m), m)):
            yield mask, self._coeffs[mask]

    def support(self) -> frozenset[int]:
        return frozenset(self._coeffs)

    def grades(self) -> frozenset[int]:
        return frozenset(blade_grade(m) for m in self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_scalar(self) -> bool:
        return all(m == 0 for m in self._coeffs)

    def is_vector(self) -> bool:
        """Pure grade 1 (the zero element counts as a vector)."""
        return all(blade_grade(m) == 1 for m in self._coeffs)

    def scalar_part(self) -> Fraction:
        return self.coefficient(0)

    def max_abs_coefficient(self) -> Fraction:
        if not self._coeffs:
            return Fraction(0)
        return max(abs(c) for c in self._coeffs.values())

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Optional["Multivector"]:
        if isinstance(other, Multivector):
            if other.sig != self.sig:
                raise SignatureMismatch(f"{self.sig} vs {other.sig}")
            return other
        if isinstance(other, (int, Fraction)):
            return Multivector.scalar(self.sig, other)
        return None

    def __add__(self, other) -> "Multivector":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._coeffs)
        for mask, c in rhs._coeffs.items():
            out[mask] = out.get(mask, Fraction(0)) + c
        return Multivector(self.sig, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Multivector":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "Multivector":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __neg__(self) -> "Multivector":
        return Multivector(self.sig, {m: -c for m, c in self._coeffs.items()})

    def __mul__(self, other) -> "Multivector":
        if isinstance(other, (int, Fraction)):
            scale = as_fraction(other)
            return Multivector(self.sig, {m: c * scale for m, c in self._coeffs.items()})
        if isinstance(other, Multivector):
            if other.sig != self.sig:
                raise SignatureMismatch(f"{self.sig} vs {other.sig}")
            out: dict[int, Fraction] = {}
            for am, ac in self._coeffs.items():
                for bm, bc in other._coeffs.items():
                    mask, sign = blade_product(self.sig, am, bm)
                    out[mask] = out.get(mask, Fraction(0)) + sign * ac * bc
            return Multivector(self.sig, out)
        return NotImplemented

    def __rmul__(self, other) -> "Multivector":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other) -> "Multivector":
        if isinstance(other, (int, Fraction)):
            scale = as_fraction(other)
            if not scale:
                raise ZeroDivisionError("division of multivector by zero")
            return self * (Fraction(1) / scale)
        return NotImplemented

    def __pow__(self, k: int) -> "Multivector":
        return integer_power(self, k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Multivector.scalar(self.sig, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.sig == other.sig and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.sig, frozenset(self._coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # -- involutions --------------------------------------------------------

    def main_involution(self) -> "Multivector":
        """Automorphism fixing positive-square generators, negating the rest."""
        low = (1 << self.sig.p) - 1
        return Multivector(
            self.sig,
            {m: (-c if (m & low).bit_count() & 1 else c) for m, c in self._coeffs.items()},
        )

    def reversion(self) -> "Multivector":
        """Anti-automorphism reversing factor order, fixing every generator."""
        out = {}
        for m, c in self._coeffs.items():
            r = blade_grade(m)
            out[m] = -c if (r * (r - 1) // 2) & 1 else c
        return Multivector(self.sig, out)

    def conjugation(self) -> "Multivector":
        """Anti-automorphism: reversion composed with the main involution."""
        return self.reversion().main_involution()

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Multivector({self.sig}, {render(self)!r})"


# ---------------------------------------------------------------------------
# module-level operation surface
# ---------------------------------------------------------------------------

def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def grade_project(a: Multivector, r: int) -> Multivector:
    if not 0 <= r <= a.sig.generators:
        raise ValueError(f"grade {r} out of range 0..{a.sig.generators}")
    return Multivector(a.sig, {m: c for m, c in a._coeffs.items() if blade_grade(m) == r})


INVOLUTION_KINDS = ("main", "reversion", "conjugation")


def involution(a: Multivector, kind: str) -> Multivector:
    if kind == "main":
        return a.main_involution()
    if kind == "reversion":
        return a.reversion()
    if kind == "conjugation":
        return a.conjugation()
    raise ValueError(f"unknown involution kind {kind!r}; expected one of {INVOLUTION_KINDS}")


def quadratic_square(w: Multivector) -> Fraction:
    """The scalar w*w of a 1-vector (its quadratic form value)."""
    if not w.is_vector():
        raise AlgebraError("quadratic_square requires a pure 1-vector")
    return (w * w).scalar_part()


def kelvin_inverse(w: Multivector) -> Multivector:
    """w / w**2 for a non-null 1-vector."""
    square = quadratic_square(w)
    if not square:
        raise SingularElement("null vector has no Kelvin inverse")
    return w * (Fraction(1) / square)


def try_inverse(a: Multivector) -> Optional[Multivector]:
    """Two-sided inverse of a, or None when a is singular.

    Elements supported on {1, B} for a single blade B invert in closed
    form; everything else falls back to a dense rational linear solve of
    a * x = 1, which certifies invertibility exactly.
    """
    support = [m for m in a.support() if m != 0]
    if not support:
        s = a.scalar_part()
        if not s:
            return None
        return Multivector.scalar(a.sig, Fraction(1) / s)
    if len(support) == 1:
        mask = support[0]
        _, sign = blade_product(a.sig, mask, mask)
        v = a.scalar_part()
        u = a.coefficient(mask)
        norm = v * v - sign * u * u
        if not norm:
            return None
        return Multivector(a.sig, {0: v / norm, mask: -u / norm})
    return _dense_inverse(a)


def inverse(a: Multivector) -> Multivector:
    result = try_inverse(a)
    if result is None:
        raise SingularElement(f"element is singular: {a}")
    return result


def _dense_inverse(a: Multivector) -> Optional[Multivector]:
    d = a.sig.generators
    if d > MAX_DENSE_SOLVE_GENERATORS:
        raise AlgebraError(
            f"dense inverse limited to {MAX_DENSE_SOLVE_GENERATORS} generators, got {d}"
        )
    dim = a.sig.blade_count
    # rows[i][j]: coefficient of blade i in a * e_j, augmented with rhs = 1.
    rows = [[Fraction(0)] * (dim + 1) for _ in range(dim)]
    for am, ac in a._coeffs.items():
        for col in range(dim):
            mask, sign = blade_product(a.sig, am, col)
            rows[mask][col] += sign * ac
    rows[0][dim] = Fraction(1)

    col_of_pivot: list[Optional[int]] = [None] * dim
    row = 0
    for col in range(dim):
        pivot = next((r for r in range(row, dim) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[row], rows[pivot] = rows[pivot], rows[row]
        inv_p = Fraction(1) / rows[row][col]
        rows[row] = [x * inv_p for x in rows[row]]
        for r in range(dim):
            if r != row and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[row])]
        col_of_pivot[row] = col
        row += 1
        if row == dim:
            break
    # inconsistent system (0 = 1 row) means no right inverse exists
    for r in range(row, dim):
        if rows[r][dim]:
            return None
    if row < dim:
        # rank-deficient left multiplication: a is a zero divisor
        return None
    coeffs = {}
    for r in range(dim):
        col = col_of_pivot[r]
        assert col is not None
        coeffs[col] = rows[r][dim]
    return Multivector(a.sig, coeffs)


def integer_power(a: Multivector, k: int) -> Multivector:
    """a**k by binary exponentiation; negative k inverts first."""
    if not isinstance(k, int):
        raise TypeError("exponent must be an integer")
    if k < 0:
        a = inverse(a)
        k = -k
    result = Multivector.one(a.sig)
    base = a
    while k:
        if k & 1:
            result = result * base
        base = base * base if k > 1 else base
        k >>= 1
    return result


def pseudoscalar(n: int) -> Multivector:
    """Ordered product e_{n+1}e_1 e_{n+2}e_2 ... e_{2n}e_n in Cl(n,n)."""
    sig = split_signature(n)
    gamma = Multivector.one(sig)
    for j in range(1, n + 1):
        gamma = gamma * Multivector.generator(sig, n + j)
        gamma = gamma * Multivector.generator(sig, j)
    return gamma


PIN_PLUS = "pin_plus"
PIN_MINUS = "pin_minus"
NOT_CERTIFIED = "not_certified"


class VersorCheck(NamedTuple):
    membership: str  # pin_plus | pin_minus | not_certified
    is_even: bool  # fixed by the main involution


def versor_check(a: Multivector) -> VersorCheck:
    """Classify a by the sign of a * conjugation(a); even flag is a' == a."""
    norm = a * a.conjugation()
    if norm == 1:
        membership = PIN_PLUS
    elif norm == -1:
        membership = PIN_MINUS
    else:
        membership = NOT_CERTIFIED
    return VersorCheck(membership, a.main_involution() == a)


def embed(a: Multivector, target: Signature) -> Multivector:
    """Canonical embedding Cl(p,q) -> Cl(P,Q) for p<=P, q<=Q.

    Negative-square generators keep their index; positive-square
    generator p+k maps to P+k.
    """
    src = a.sig
    if src.p > target.p or src.q > target.q:
        raise SignatureMismatch(f"cannot embed {src} into {target}")
    if src == target:
        return a
    out = {}
    for mask, c in a._coeffs.items():
        new_mask = 0
        for i in blade_indices(mask):
            big = i if i <= src.p else target.p + (i - src.p)
            new_mask |= target.generator_mask(big)
        out[new_mask] = c
    return Multivector(target, out)


# ---------------------------------------------------------------------------
# text grammar: "5/4 + 3/4*e1e3", "-e1", "0"
# ---------------------------------------------------------------------------

def render(a: Multivector) -> str:
    parts = []
    for mask, coeff in a.terms():
        if mask == 0:
            body = str(coeff if coeff > 0 or not parts else -coeff)
        else:
            mag = coeff if coeff > 0 or not parts else -coeff
            if mag == 1:
                body = blade_name(mask)
            elif mag == -1:
                body = "-" + blade_name(mask)
            else:
                body = f"{mag}*{blade_name(mask)}"
        if not parts:
            parts.append(body)
        else:
            parts.append(" + " if coeff > 0 else " - ")
            parts.append(body)
    return "".join(parts) if parts else "0"


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coeff>\d+(?:/\d+)?)(?:\s*\*\s*(?P<blade_after>(?:e\d+)+))?"
    r"|(?P<blade_only>(?:e\d+)+))"
)
_GEN_RE = re.compile(r"e(\d+)")


def parse(text: str, sig: Signature) -> Multivector:
    """Parse the rendering grammar back into a multivector."""
    stripped = text.strip()
    if stripped == "0":
        return Multivector.zero(sig)
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(stripped):
        match = _TERM_RE.match(stripped, pos)
        if match is None:
            raise ValueError(f"cannot parse multivector at ...{stripped[pos:]!r}")
        sign_tok = match.group("sign")
        if not first and sign_tok is None:
            raise ValueError(f"missing +/- between terms near ...{stripped[pos:]!r}")
        sign = -1 if sign_tok == "-" else 1
        coeff = Fraction(match.group("coeff")) if match.group("coeff") else Fraction(1)
        blade_tok = match.group("blade_after") or match.group("blade_only")
        mask = 0
        if blade_tok:
            last = 0
            for gen in _GEN_RE.findall(blade_tok):
                i = int(gen)
                if i <= last:
                    raise ValueError(f"blade {blade_tok!r} not in ascending order")
                mask |= sig.generator_mask(i)
                last = i
        coeffs[mask] = coeffs.get(mask, Fraction(0)) + sign * coeff
        pos = match.end()
        first = False
    return Multivector(sig, coeffs)


# ---------------------------------------------------------------------------
# randomized elements for property sweeps
# ---------------------------------------------------------------------------

def random_multivector(rng, sig: Signature, max_blades: int = 8, magnitude: int = 9) -> Multivector:
    """Random sparse multivector with small rational coefficients."""
    count = rng.randint(1, max(1, max_blades))
    coeffs = {}
    for _ in range(count):
        mask = rng.randrange(sig.blade_count)
        coeffs[mask] = Fraction(rng.randint(-magnitude, magnitude), rng.randint(1, 6))
    return Multivector(sig, coeffs)
