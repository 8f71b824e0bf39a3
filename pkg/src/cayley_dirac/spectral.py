"""Fourier symbols of lattice stencils and Brillouin-zone scanning.

The only floating-point module of the package.  A stencil L with taps
coeff(o) responds to the plane wave exp(i xi . x) with the symbol
sum_o coeff(o) exp(i h xi . o); dispersion conditions are evaluated on a
uniform grid of the zone [-pi/h, pi/h]^n and roots are reported as
sign-change brackets, never iterated.  All scans are deterministic:
fixed row-major iteration, no parallel reduction.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .clifford import Multivector, blade_name
from .lattice import LatticeGeometry, OperatorStencil, diff_stencil, laplacian_stencil

SINE = "sine"
TANGENT = "tangent"
VARIANTS = (SINE, TANGENT)


class DispersionPole(ValueError):
    """The dispersion condition is evaluated at a pole."""


@dataclass(frozen=True)
class SymbolValue:
    """Complex blade coefficients of a stencil's plane-wave response."""

    comps: dict[int, complex]

    def coefficient(self, mask: int) -> complex:
        return self.comps.get(mask, 0j)

    def max_abs(self) -> float:
        if not self.comps:
            return 0.0
        return max(abs(c) for c in self.comps.values())

    def items(self) -> list[tuple[int, complex]]:
        return sorted(self.comps.items())


def in_zone(geometry: LatticeGeometry, xi: tuple[float, ...]) -> bool:
    edge = math.pi / float(geometry.h)
    return len(xi) == geometry.n and all(-edge <= x <= edge for x in xi)


def stencil_symbol(stencil: OperatorStencil, xi: tuple[float, ...]) -> SymbolValue:
    """sum_o coeff(o) * exp(i h xi . o) as complex blade coefficients."""
    geometry = stencil.geometry
    if not in_zone(geometry, xi):
        raise ValueError(f"momentum {xi} outside the zone for h = {geometry.h}")
    h = float(geometry.h)
    comps: dict[int, complex] = {}
    for offset, coeff in sorted(stencil.taps().items()):
        phase = cmath.exp(1j * h * sum(x * o for x, o in zip(xi, offset)))
        for mask, value in coeff.terms():
            comps[mask] = comps.get(mask, 0j) + float(value) * phase
    return SymbolValue(comps)


def symmetric_part_stencil(geometry: LatticeGeometry) -> OperatorStencil:
    """sum_j e_j (backward + forward)/2: the central-difference part whose
    symbol vanishes at the zone center and at every zone edge (the
    doubling exhibit)."""
    sig = geometry.sig
    total: Optional[OperatorStencil] = None
    for j in range(1, geometry.n + 1):
        ej = OperatorStencil.multiplier(geometry, Multivector.generator(sig, j))
        central = (
            diff_stencil(geometry, j, "forward") + diff_stencil(geometry, j, "backward")
        ).scale(Fraction(1, 2))
        part = ej.compose(central)
        total = part if total is None else total + part
    assert total is not None
    return total


def laplacian_symbol_closed_form(geometry: LatticeGeometry, xi: tuple[float, ...]) -> float:
    h = float(geometry.h)
    return -(4.0 / h**2) * sum(math.sin(h * x / 2.0) ** 2 for x in xi)


def dispersion_residual(
    xi: tuple[float, ...],
    geometry: LatticeGeometry,
    m: float,
    variant: str,
) -> float:
    """LHS - RHS of the chosen energy-momentum condition.

    sine:     sum_j (4/h^2) sin^2(h xi_j / 2) - m^2 / (1 - 2 h m)
    tangent:  sum_j (4/h^2) tan^2(h xi_j)     - m^2
    """
    if not in_zone(geometry, xi):
        raise ValueError(f"momentum {xi} outside the zone for h = {geometry.h}")
    h = float(geometry.h)
    if variant == SINE:
        denom = 1.0 - 2.0 * h * m
        if denom == 0.0:
            raise DispersionPole("sine condition pole: 1 - 2hm = 0")
        lhs = sum((4.0 / h**2) * math.sin(h * x / 2.0) ** 2 for x in xi)
        return lhs - m * m / denom
    if variant == TANGENT:
        lhs = 0.0
        for x in xi:
            c = math.cos(h * x)
            if c == 0.0:
                raise DispersionPole(f"tangent condition pole at h*xi = {h * x}")
            lhs += (4.0 / h**2) * (math.sin(h * x) / c) ** 2
        return lhs - m * m
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


# |residual| at or below this counts as a root hit on the grid; needed for
# tangential roots (the condition can touch zero at a zone edge without a
# sign change, e.g. when the right side equals the left side's maximum).
ROOT_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class ScanReport:
    """Deterministic summary of a uniform zone scan."""

    variant: str
    m: float
    grid_density: int
    min_abs_residual: float
    argmin: tuple[float, ...]
    brackets: list[tuple[tuple[float, ...], tuple[float, ...]]]
    zero_touches: list[tuple[float, ...]]
    samples: list[tuple[tuple[float, ...], float]]

    def root_locations(self) -> list[tuple[float, ...]]:
        """Bracket midpoints plus grid points whose residual is zero to
        tolerance; every entry is within one grid step of a root."""
        mids = [
            tuple((x + y) / 2.0 for x, y in zip(a, b)) for a, b in self.brackets
        ]
        return mids + list(self.zero_touches)

    @property
    def has_root(self) -> bool:
        return bool(self.brackets or self.zero_touches)


def _grid_axis(geometry: LatticeGeometry, grid_density: int) -> list[float]:
    edge = math.pi / float(geometry.h)
    step = 2.0 * edge / grid_density
    return [-edge + i * step for i in range(grid_density + 1)]


def brillouin_scan(
    geometry: LatticeGeometry,
    m: float,
    variant: str,
    grid_density: int,
    keep_samples: bool = False,
) -> ScanReport:
    """Scan the zone on a uniform inclusive grid.

    Reports the minimum |residual| with its first row-major location and
    every adjacent grid pair (along each axis) where the residual
    changes sign; those pairs bracket roots of the condition.
    """
    if grid_density < 8:
        raise ValueError("grid density must be >= 8")
    axis = _grid_axis(geometry, grid_density)
    n = geometry.n
    values: dict[tuple[int, ...], float] = {}

    def indices() -> Iterator[tuple[int, ...]]:
        yield from itertools.product(range(len(axis)), repeat=n)

    min_abs = math.inf
    argmin: tuple[float, ...] = ()
    samples: list[tuple[tuple[float, ...], float]] = []
    touches: list[tuple[float, ...]] = []
    for idx in indices():
        xi = tuple(axis[i] for i in idx)
        residual = dispersion_residual(xi, geometry, m, variant)
        values[idx] = residual
        if keep_samples:
            samples.append((xi, residual))
        magnitude = abs(residual)
        if magnitude <= ROOT_RESIDUAL_TOL:
            touches.append(xi)
        if magnitude < min_abs:
            min_abs = magnitude
            argmin = xi
    brackets = []
    for idx in sorted(values):
        for a in range(n):
            neighbour = tuple(v + 1 if i == a else v for i, v in enumerate(idx))
            if neighbour in values and values[idx] * values[neighbour] < 0.0:
                brackets.append(
                    (
                        tuple(axis[i] for i in idx),
                        tuple(axis[i] for i in neighbour),
                    )
                )
    return ScanReport(
        variant, m, grid_density, min_abs, argmin, brackets, touches, samples
    )


def symbol_matches_laplacian(
    geometry: LatticeGeometry, grid_density: int, rel_tol: float = 1e-12
) -> tuple[bool, float]:
    """Compare the Laplacian stencil symbol with its closed form on a grid.

    Returns (ok, worst relative error).  The symbol is real and
    non-positive over the zone; the comparison is relative except at the
    zone center where both sides vanish.
    """
    stencil = laplacian_stencil(geometry)
    axis = _grid_axis(geometry, grid_density)
    worst = 0.0
    for xi in itertools.product(axis, repeat=geometry.n):
        symbol = stencil_symbol(stencil, xi)
        closed = laplacian_symbol_closed_form(geometry, xi)
        # imaginary and non-scalar parts must vanish to tolerance
        err = 0.0
        for mask, value in symbol.items():
            if mask == 0:
                err = max(err, abs(value.imag), abs(value.real - closed))
            else:
                err = max(err, abs(value))
        scale = max(1.0, abs(closed))
        worst = max(worst, err / scale)
    return worst <= rel_tol, worst


def blade_names_of(symbol: SymbolValue) -> dict[str, complex]:
    return {blade_name(mask): value for mask, value in symbol.items()}
