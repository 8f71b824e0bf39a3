"""Audit suite orchestration.

Each suite turns one run configuration into a list of AuditReports; the
overall verdict of a run is ``holds`` exactly when no non-degenerate
audit fails.  Randomized sweeps are seeded from the configuration, so
identical configurations produce identical reports.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .clifford import (
    Multivector,
    grade_project,
    kelvin_inverse,
    quadratic_square,
    random_multivector,
    split_signature,
)
from .conformal import cayley_identity_residuals, plane_blade
from .lattice import Box, LatticeGeometry, MassVector
from .schemas import VerifyRequest
from .solutions import (
    DEGENERATE,
    FAILS,
    HOLDS,
    AuditReport,
    chiral_solution_audit,
    factorization_audit,
    massless_limit_audits,
    proposition_audit,
)
from .spectral import (
    DispersionPole,
    brillouin_scan,
    stencil_symbol,
    symbol_matches_laplacian,
    symmetric_part_stencil,
)
from .util import parallel_map


@dataclass(frozen=True)
class SuiteResult:
    version: str
    config: VerifyRequest
    reports: list[AuditReport]
    overall: str


# ---------------------------------------------------------------------------
# randomized exact sweeps
# ---------------------------------------------------------------------------

def algebra_axiom_audit(n: int, cases: int, seed: int) -> AuditReport:
    """Randomized exact checks of the algebra's defining laws.

    Every case draws fresh random multivectors and checks associativity,
    the three involution product laws, and involutivity; the generator
    anticommutation table is checked exhaustively once.  Failures are
    counted, never tolerated.
    """
    sig = split_signature(n)
    rng = random.Random(seed)
    failures = 0

    for j in range(1, 2 * n + 1):
        ej = Multivector.generator(sig, j)
        for k in range(1, 2 * n + 1):
            ek = Multivector.generator(sig, k)
            anti = ej * ek + ek * ej
            if j == k:
                expected = Multivector.scalar(sig, -2 if j <= n else 2)
            else:
                expected = Multivector.zero(sig)
            if anti != expected:
                failures += 1

    for _ in range(cases):
        a = random_multivector(rng, sig)
        b = random_multivector(rng, sig)
        c = random_multivector(rng, sig)
        if (a * b) * c != a * (b * c):
            failures += 1
        ab = a * b
        if ab.main_involution() != a.main_involution() * b.main_involution():
            failures += 1
        if ab.reversion() != b.reversion() * a.reversion():
            failures += 1
        if ab.conjugation() != b.conjugation() * a.conjugation():
            failures += 1
        if a.main_involution().main_involution() != a:
            failures += 1
        if a.reversion().reversion() != a:
            failures += 1
        if a.conjugation().conjugation() != a:
            failures += 1
        vector = grade_project(a, 1)
        if quadratic_square(vector) != 0:
            if vector * kelvin_inverse(vector) != 1:
                failures += 1

    params = {"n": str(n), "cases": str(cases), "seed": str(seed), "failures": str(failures)}
    return AuditReport(
        "algebra-axioms",
        params,
        Fraction(failures),
        HOLDS if failures == 0 else FAILS,
        None if failures == 0 else {"failures": str(failures)},
    )


def cayley_identity_audit(n: int, cases: int, seed: int) -> AuditReport:
    """Exact residuals of the three Cayley-map identities at random
    rational 2-vector arguments t e_j e_{n+j}, t not a pole."""
    rng = random.Random(seed)
    worst = Fraction(0)
    witness = None
    checked = 0
    while checked < cases:
        t = Fraction(rng.randint(-60, 60), rng.randint(1, 12))
        if t * t == 1:
            continue
        axis = 1 + checked % n
        w = plane_blade(n, axis) * t
        residuals = cayley_identity_residuals(w)
        magnitude = max(r.max_abs_coefficient() for r in residuals)
        if magnitude > worst:
            worst = magnitude
            witness = {"t": str(t), "axis": str(axis)}
        checked += 1
    params = {"n": str(n), "cases": str(cases), "seed": str(seed)}
    return AuditReport(
        "cayley-identities",
        params,
        worst,
        HOLDS if worst == 0 else FAILS,
        witness,
    )


# ---------------------------------------------------------------------------
# suite runners
# ---------------------------------------------------------------------------

def _sources(config: VerifyRequest) -> list[str]:
    if config.source == "both":
        return ["paper", "derived"]
    return [config.source]


def _suite_algebra(config, geometry, mass) -> list[AuditReport]:
    return [algebra_axiom_audit(geometry.n, cases=250, seed=config.seed)]


def _suite_cayley(config, geometry, mass) -> list[AuditReport]:
    return [cayley_identity_audit(geometry.n, cases=500, seed=config.seed)]


def _suite_proposition(config, geometry, mass) -> list[AuditReport]:
    box = Box.centered(geometry.n, config.box)
    return [
        proposition_audit(geometry, mass, source, box) for source in _sources(config)
    ]


def _suite_chiral(config, geometry, mass) -> list[AuditReport]:
    box = Box.centered(geometry.n, config.box)
    reports: list[AuditReport] = []
    for source in _sources(config):
        reports.extend(chiral_solution_audit(geometry, mass, source, box))
    return reports


def _suite_factorization(config, geometry, mass) -> list[AuditReport]:
    return [factorization_audit(geometry, mass)]


def _suite_massless(config, geometry, mass) -> list[AuditReport]:
    box = Box.centered(geometry.n, max(config.box, 4))
    return massless_limit_audits(geometry, mass.omega, k_max=10, box=box)


def _suite_dispersion(config, geometry, mass) -> list[AuditReport]:
    reports = []
    base = {"n": str(geometry.n), "h": str(geometry.h), "grid": str(config.grid)}

    sym_grid = config.grid if geometry.n == 1 else min(config.grid, 64 if geometry.n == 2 else 8)
    ok, worst = symbol_matches_laplacian(geometry, sym_grid, rel_tol=1e-12)
    params = dict(base)
    params["grid"] = str(sym_grid)
    params["max_rel_error"] = repr(worst)
    params["tolerance"] = "1e-12"
    reports.append(
        AuditReport("laplacian-symbol", params, None, HOLDS if ok else FAILS)
    )

    m_float = float(mass.m)
    params = dict(base)
    params["m"] = repr(m_float)
    params["variant"] = "sine"
    try:
        scan = brillouin_scan(geometry, m_float, "sine", config.grid)
    except DispersionPole as exc:
        reports.append(
            AuditReport("dispersion-root", params, None, DEGENERATE, {"reason": str(exc)})
        )
    else:
        params["min_abs_residual"] = repr(scan.min_abs_residual)
        params["brackets"] = str(len(scan.brackets))
        params["zero_touches"] = str(len(scan.zero_touches))
        reports.append(
            AuditReport(
                "dispersion-root",
                params,
                None,
                HOLDS if scan.has_root else FAILS,
                None if scan.has_root else {"min_abs_residual": repr(scan.min_abs_residual)},
            )
        )

    edge = math.pi / float(geometry.h)
    sym_op = symmetric_part_stencil(geometry)
    points = [(0.0,) * geometry.n, (edge,) * geometry.n]
    for j in range(geometry.n):
        points.append(tuple(edge if i == j else 0.0 for i in range(geometry.n)))
    worst_sym = max(stencil_symbol(sym_op, xi).max_abs() for xi in points)
    params = dict(base)
    params["max_abs_symbol"] = repr(worst_sym)
    params["tolerance"] = "1e-12"
    reports.append(
        AuditReport(
            "fermion-doubling", params, None, HOLDS if worst_sym <= 1e-12 else FAILS
        )
    )
    return reports


_SUITE_RUNNERS = {
    "algebra-axioms": _suite_algebra,
    "cayley-identities": _suite_cayley,
    "proposition": _suite_proposition,
    "chiral": _suite_chiral,
    "factorization": _suite_factorization,
    "massless": _suite_massless,
    "dispersion": _suite_dispersion,
}


def run_suites(config: VerifyRequest) -> SuiteResult:
    """Execute the selected suites and aggregate deterministically.

    Suites are independent pure computations; CAYLEY_DIRAC_THREADS caps
    how many run concurrently.  Reports keep the fixed suite order.
    """
    geometry = LatticeGeometry(config.n, config.h_fraction())
    mass = MassVector(config.m_fraction(), config.omega_fractions())
    selected = config.selected_suites()

    def run_one(name: str) -> list[AuditReport]:
        return _SUITE_RUNNERS[name](config, geometry, mass)

    batches = parallel_map(run_one, selected)
    reports = [report for batch in batches for report in batch]
    overall = HOLDS if all(r.verdict != FAILS for r in reports) else FAILS
    return SuiteResult(__version__, config, reports, overall)
