import cmath
import math
import random
from fractions import Fraction

import pytest

from cayley_dirac.clifford import random_multivector
from cayley_dirac.lattice import (
    LatticeGeometry,
    OperatorStencil,
    diff_stencil,
    dirac_stencil,
    laplacian_stencil,
)
from cayley_dirac.spectral import (
    DispersionPole,
    ROOT_RESIDUAL_TOL,
    brillouin_scan,
    dispersion_residual,
    laplacian_symbol_closed_form,
    stencil_symbol,
    symbol_matches_laplacian,
    symmetric_part_stencil,
)

F = Fraction
G1 = LatticeGeometry(1, F(1))


def quadratic_root_mass() -> float:
    """Positive root of m^2 + 8m - 4 = 0, i.e. m^2/(1-2m) = 4."""
    return (-8 + math.sqrt(64 + 16)) / 2


def direct_plane_wave_application(stencil, xi, at_point):
    """Oracle: apply the stencil to the complex field exp(i h xi . k) and
    divide out the wave at the evaluation point, blade by blade."""
    h = float(stencil.geometry.h)

    def wave(k):
        return cmath.exp(1j * h * sum(x * kj for x, kj in zip(xi, k)))

    total: dict[int, complex] = {}
    for offset, coeff in stencil.taps().items():
        shifted = tuple(k + o for k, o in zip(at_point, offset))
        for mask, value in coeff.terms():
            total[mask] = total.get(mask, 0j) + float(value) * wave(shifted)
    base = wave(at_point)
    return {mask: value / base for mask, value in total.items()}


def test_symbol_matches_direct_application_random():
    rng = random.Random(17)
    for n in (1, 2):
        g = LatticeGeometry(n, F(1, 2))
        sig = g.sig
        for _ in range(50):
            taps = {}
            for _ in range(rng.randint(1, 4)):
                offset = tuple(rng.randint(-2, 2) for _ in range(n))
                taps[offset] = random_multivector(rng, sig, max_blades=3)
            stencil = OperatorStencil(g, taps)
            xi = tuple(rng.uniform(-math.pi / float(g.h), math.pi / float(g.h)) for _ in range(n))
            symbol = stencil_symbol(stencil, xi)
            oracle = direct_plane_wave_application(stencil, xi, (1,) * n)
            union = set(symbol.comps) | set(oracle)
            scale = max(1.0, symbol.max_abs())
            for mask in union:
                delta = abs(symbol.coefficient(mask) - oracle.get(mask, 0j))
                assert delta / scale < 1e-12


def test_zero_sum_taps_vanish_at_zero():
    fwd = diff_stencil(G1, 1, "forward")
    assert stencil_symbol(fwd, (0.0,)).max_abs() < 1e-15
    # the Dirac taps also sum to zero (constants are in its kernel)
    assert stencil_symbol(dirac_stencil(G1), (0.0,)).max_abs() < 1e-15
    sym = stencil_symbol(fwd, (0.7,))
    expected = cmath.exp(1j * 0.7) - 1.0
    assert abs(sym.coefficient(0) - expected) < 1e-12


def test_laplacian_symbol_closed_form():
    for n, h, grid in [(1, F(1), 64), (2, F(1, 2), 32)]:
        g = LatticeGeometry(n, h)
        ok, worst = symbol_matches_laplacian(g, grid)
        assert ok, worst
    # spot value: at xi = pi/h the 1d symbol is -4/h^2
    g = LatticeGeometry(1, F(1, 3))
    value = laplacian_symbol_closed_form(g, (3 * math.pi,))
    assert abs(value + 4 * 9) < 1e-9
    symbol = stencil_symbol(laplacian_stencil(g), (3 * math.pi,))
    assert abs(symbol.coefficient(0) - value) < 1e-9


def test_laplacian_symbol_nonpositive_zero_only_at_center():
    g = LatticeGeometry(1, F(1))
    lap = laplacian_stencil(g)
    for i in range(65):
        xi = (-math.pi + i * 2 * math.pi / 64,)
        value = stencil_symbol(lap, xi).coefficient(0).real
        assert value <= 1e-12
        if abs(xi[0]) > 1e-9:
            assert value < 0


def test_dispersion_residual_values():
    m = quadratic_root_mass()
    assert abs(m - (-4 + 2 * math.sqrt(5))) < 1e-15
    assert abs(dispersion_residual((math.pi,), G1, m, "sine")) < 1e-9
    assert dispersion_residual((0.0,), G1, 0.0, "tangent") == 0.0
    with pytest.raises(DispersionPole):
        dispersion_residual((0.0,), G1, 0.5, "sine")  # 1 - 2hm = 0
    with pytest.raises(ValueError):
        dispersion_residual((10.0,), G1, 0.1, "sine")  # outside zone
    with pytest.raises(ValueError):
        dispersion_residual((0.0,), G1, 0.1, "cosine")


def test_scan_finds_root_at_zone_edge():
    m = quadratic_root_mass()
    report = brillouin_scan(G1, m, "sine", 64)
    assert report.has_root
    assert report.min_abs_residual <= ROOT_RESIDUAL_TOL
    locations = report.root_locations()
    assert any(abs(abs(x[0]) - math.pi) < 1e-3 for x in locations)


def test_scan_no_root_when_condition_unattainable():
    # m^2/(1-2hm) > 4n/h^2: m = 0.49 gives 12.005 > 4
    report = brillouin_scan(G1, 0.49, "sine", 64)
    assert not report.has_root
    assert report.min_abs_residual > 0
    assert not report.brackets and not report.zero_touches


def test_scan_tangent_brackets():
    report = brillouin_scan(G1, 1.0, "tangent", 64)
    assert report.brackets
    for a, b in report.brackets:
        ra = dispersion_residual(a, G1, 1.0, "tangent")
        rb = dispersion_residual(b, G1, 1.0, "tangent")
        assert ra * rb < 0


def test_scan_determinism():
    m = quadratic_root_mass()
    first = brillouin_scan(G1, m, "sine", 64, keep_samples=True)
    second = brillouin_scan(G1, m, "sine", 64, keep_samples=True)
    assert first == second


def test_scan_grid_bound():
    with pytest.raises(ValueError):
        brillouin_scan(G1, 0.1, "sine", 4)


def test_doubling_exhibit():
    for n in (1, 2):
        g = LatticeGeometry(n, F(1, 2))
        edge = math.pi / float(g.h)
        sym = symmetric_part_stencil(g)
        assert stencil_symbol(sym, (0.0,) * n).max_abs() < 1e-12
        assert stencil_symbol(sym, (edge,) * n).max_abs() < 1e-12
        assert stencil_symbol(sym, (-edge,) * n).max_abs() < 1e-12
        interior = tuple(0.8 for _ in range(n))
        assert stencil_symbol(sym, interior).max_abs() > 0.1


def test_symmetric_part_agrees_with_dirac_vector_part():
    # the e_j blades of the Dirac symbol coincide with the symmetric part
    g = LatticeGeometry(1, F(1))
    xi = (1.1,)
    dirac_sym = stencil_symbol(dirac_stencil(g), xi)
    sym_sym = stencil_symbol(symmetric_part_stencil(g), xi)
    e1_mask = g.sig.generator_mask(1)
    assert abs(dirac_sym.coefficient(e1_mask) - sym_sym.coefficient(e1_mask)) < 1e-12
