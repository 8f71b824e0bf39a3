"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Exact claims are asserted at zero residual (rational arithmetic);
floating-point claims use the stated tolerances: 1e-12 relative for
symbol identities, 1e-9 for root residuals, 1e-3 for root location.
"""

import json
import math
import random
import time
from fractions import Fraction

from conftest import audit_parameter_sets

from cayley_dirac.cli import main
from cayley_dirac.clifford import Multivector
from cayley_dirac.conformal import (
    Spin2Vector,
    cayley,
    inverse_stereographic,
    stereographic,
)
from cayley_dirac.lattice import (
    Box,
    LatticeGeometry,
    MassVector,
    chi_field,
    dirac_stencil,
    laplacian_stencil,
    residual_field,
)
from cayley_dirac.solutions import (
    HOLDS,
    FAILS,
    build_psi,
    closed_form_phi,
    closed_form_z,
    derive_axis_factor,
    factorization_audit,
    massless_limit_audits,
    proposition_audit,
)
from cayley_dirac.spectral import (
    brillouin_scan,
    stencil_symbol,
    symbol_matches_laplacian,
    symmetric_part_stencil,
)
from cayley_dirac.suites import algebra_axiom_audit, cayley_identity_audit

F = Fraction


def record(number: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"criterion {number:02d}: {status} - {detail}")
    assert ok, f"criterion {number}: {detail}"


def test_criterion_01_algebra_axioms():
    started = time.perf_counter()
    reports = [algebra_axiom_audit(n, cases=1000, seed=101 + n) for n in (1, 2, 3)]
    elapsed = time.perf_counter() - started
    ok = all(r.verdict == HOLDS and r.residual_max == 0 for r in reports)
    ok = ok and elapsed < 10.0
    record(1, ok, f"3000 randomized axiom cases (n=1..3), zero failures, {elapsed:.2f}s < 10s")


def test_criterion_02_cayley_identities():
    report = cayley_identity_audit(n=2, cases=500, seed=7)
    ok = report.verdict == HOLDS and report.residual_max == 0
    record(2, ok, "500 random 2-vector arguments, all three identity residuals exactly 0")


def test_criterion_03_stereographic_invariant():
    rng = random.Random(303)
    checked = 0
    ok = True
    while checked < 200:
        t = F(rng.randint(-80, 80), rng.randint(1, 16))
        if t * t == 1:
            continue
        z = Spin2Vector(1, 1, t)
        p = stereographic(z)
        ok = ok and (p.v * p.v - p.u * p.u == 1)
        ok = ok and (inverse_stereographic(p).t == t)
        checked += 1
    record(3, ok, "200 random t: v^2 - u^2 = 1 exactly and exact round-trip")


def test_criterion_04_dirac_square_identity():
    ok = True
    cases = [
        (1, F(1)), (1, F(2, 7)), (1, F(9, 2)),
        (2, F(1)), (2, F(3, 5)),
        (3, F(1)), (3, F(4, 9)),
    ]
    for n, h in cases:
        geometry = LatticeGeometry(n, h)
        dirac = dirac_stencil(geometry)
        ok = ok and dirac.compose(dirac) == laplacian_stencil(geometry).scale(-1)
    record(4, ok, "D*D = -Laplacian tap-by-tap for n in {1,2,3}, rational h")


def test_criterion_05_proposition_derived():
    parameter_sets = audit_parameter_sets()
    ok = len(parameter_sets) == 20
    for geometry, mass in parameter_sets:
        report = proposition_audit(geometry, mass, "derived", Box.centered(geometry.n, 3))
        ok = ok and report.verdict == HOLDS and report.residual_max == 0
    anchor_geometry = LatticeGeometry(1, F(1))
    anchor_mass = MassVector(F(1, 2), (F(1),))
    factor = derive_axis_factor(anchor_geometry, anchor_mass, 1)
    ok = ok and (factor.phi.v, factor.phi.u) == (F(5, 4), F(3, 4))
    oracle = residual_field(
        dirac_stencil(anchor_geometry),
        anchor_mass.mass_multiplier(anchor_geometry),
        build_psi(anchor_geometry, [factor]),
        Box.centered(1, 3),
    )
    ok = ok and oracle.is_zero
    record(5, ok, "20 parameter sets: derived-source residual exactly 0 on [-3,3]^n; "
                  "anchor factor 5/4 + 3/4*e1e2 confirmed by the residual oracle")


def test_criterion_06_proposition_paper_archival():
    ok = True
    for geometry, mass in audit_parameter_sets():
        report = proposition_audit(geometry, mass, "paper", Box.centered(geometry.n, 3))
        ok = ok and report.verdict in (HOLDS, FAILS)
        ok = ok and isinstance(report.residual_max, Fraction)
        ok = ok and report.table is not None
        zs = closed_form_z(geometry, mass)
        phis = closed_form_phi(geometry, mass)
        for z, factor in zip(zs, phis):
            ok = ok and cayley(z.to_multivector()) == factor.phi_multivector()
    record(6, ok, "20 parameter sets: paper-source residuals archived exactly and "
                  "closed-form phi = cayley(z) wherever defined")


def test_criterion_07_massless_limit():
    ok = True
    for n, omega in [(1, (F(1),)), (2, (F(3, 5), F(4, 5)))]:
        geometry = LatticeGeometry(n, F(1))
        reports = massless_limit_audits(geometry, omega, k_max=10, box=Box.centered(n, 4))
        ok = ok and all(r.verdict == HOLDS for r in reports)
        ok = ok and len(reports[1].table) == 10 * n
    record(7, ok, "Psi*gamma = chi exact on [-4,4]^n at the limit branch; "
                  "deviations phi+1 shrink monotonically along m_k = 2^-k, k=1..10")


def test_criterion_08_chi_properties():
    rng = random.Random(808)
    ok = True
    for n in (1, 2, 3):
        geometry = LatticeGeometry(n, F(1, 2))
        chi = chi_field(geometry)
        sig = geometry.sig
        for _ in range(100):
            k = tuple(rng.randint(-8, 8) for _ in range(n))
            value = chi.at(k)
            ok = ok and value * value == 1
            for j in range(1, n + 1):
                up = tuple(ki + (1 if i == j - 1 else 0) for i, ki in enumerate(k))
                down = tuple(ki - (1 if i == j - 1 else 0) for i, ki in enumerate(k))
                ok = ok and chi.at(up) == -value and chi.at(down) == -value
                ej = Multivector.generator(sig, j)
                enj = Multivector.generator(sig, n + j)
                ok = ok and (value * ej + ej * value).is_zero()
                ok = ok and (value * enj + enj * value).is_zero()
    exhibit = residual_field(
        dirac_stencil(LatticeGeometry(1, F(1))),
        None,
        chi_field(LatticeGeometry(1, F(1))),
        Box.centered(1, 3),
    )
    ok = ok and not exhibit.is_zero and exhibit.max_abs == 2  # the (2/h) terms
    record(8, ok, "chi^2 = 1, chi(x +- h e_j) = -chi(x), graded anticommutation at "
                  "100 random points per n; D*chi != 0 exhibited")


def test_criterion_09_factorization():
    ok = True
    for geometry, mass in audit_parameter_sets()[:10]:
        report = factorization_audit(geometry, mass)
        ok = ok and report.params["lhs_expansions_agree"] == "true"
        ok = ok and isinstance(report.residual_max, Fraction)
        ok = ok and report.table is not None
    zero_mass_report = factorization_audit(LatticeGeometry(1, F(1)), MassVector(F(0), (F(1),)))
    ok = ok and zero_mass_report.verdict == HOLDS and zero_mass_report.residual_max == 0
    record(9, ok, "two independent LHS expansions agree tap-by-tap on 10 parameter "
                  "sets; residual stencils archived; m=0 residual exactly 0")


def test_criterion_10_dispersion():
    ok = True
    for n in (1, 2):
        ok_n, worst = symbol_matches_laplacian(LatticeGeometry(n, F(1)), 64, rel_tol=1e-12)
        ok = ok and ok_n
    m_root = (-8 + math.sqrt(80)) / 2  # root of m^2 + 8m - 4 = 0
    geometry = LatticeGeometry(1, F(1))
    scan = brillouin_scan(geometry, m_root, "sine", 64)
    ok = ok and scan.has_root
    ok = ok and any(abs(abs(x[0]) - math.pi) < 1e-3 for x in scan.root_locations())
    sym = symmetric_part_stencil(geometry)
    edge = math.pi / 1.0
    ok = ok and stencil_symbol(sym, (0.0,)).max_abs() <= 1e-12
    ok = ok and stencil_symbol(sym, (edge,)).max_abs() <= 1e-12
    record(10, ok, "Laplacian symbol matches closed form to 1e-12 on 64^n grids "
                   "(n<=2); sine scan locates the root at xi = pi within 1e-3; "
                   "symmetric-part symbol vanishes at 0 and pi/h (doubling)")


def test_criterion_11_end_to_end(capsys, tmp_path):
    argv = [
        "verify", "--suite", "proposition", "--n", "1", "--h", "1",
        "--m", "1/2", "--omega", "1", "--box", "3",
    ]
    code_first = main(list(argv))
    first = capsys.readouterr().out
    code_second = main(list(argv))
    second = capsys.readouterr().out
    ok = code_first == 0 and code_second == 0 and first == second
    payload = json.loads(first)
    ok = ok and payload["overall"] == "holds"

    code_paper = main(argv[:-8] + ["--source", "paper", "--m", "1/2", "--omega", "1"])
    capsys.readouterr()
    ok = ok and code_paper == 1

    code_usage = main(["verify", "--omega", "2"])
    capsys.readouterr()
    ok = ok and code_usage == 2

    started = time.perf_counter()
    code_full = main(["verify", "--source", "both", "--output",
                      str(tmp_path / "full.json")])
    elapsed = time.perf_counter() - started
    capsys.readouterr()
    ok = ok and code_full == 1  # archived discrepancies fail honestly
    full = json.loads((tmp_path / "full.json").read_text())
    ok = ok and len(full["reports"]) >= 10
    ok = ok and elapsed < 60.0
    record(11, ok, f"deterministic JSON, exit codes 0/1/2 honored, full default "
                   f"suite in {elapsed:.2f}s < 60s")
