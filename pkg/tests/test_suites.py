from cayley_dirac.schemas import VerifyRequest
from cayley_dirac.solutions import DEGENERATE, FAILS, HOLDS
from cayley_dirac.suites import algebra_axiom_audit, cayley_identity_audit, run_suites
from cayley_dirac.util import THREADS_ENV, parallel_map, thread_cap


def test_selected_suites_expansion():
    assert VerifyRequest().selected_suites() == (
        "algebra-axioms",
        "cayley-identities",
        "proposition",
        "chiral",
        "factorization",
        "massless",
        "dispersion",
    )
    request = VerifyRequest(suites=["chiral", "proposition", "chiral"])
    assert request.selected_suites() == ("chiral", "proposition")


def test_overall_verdict_logic():
    holds = run_suites(VerifyRequest(suites=["proposition"], m="1/2", omega=["1"]))
    assert holds.overall == HOLDS
    fails = run_suites(
        VerifyRequest(suites=["proposition"], source="paper", m="1/2", omega=["1"])
    )
    assert fails.overall == FAILS
    degenerate = run_suites(
        VerifyRequest(suites=["proposition"], source="paper", m="1", omega=["1"])
    )
    assert degenerate.reports[0].verdict == DEGENERATE
    assert degenerate.overall == HOLDS  # degenerate audits do not fail the run


def test_seeded_sweeps_are_reproducible():
    first = algebra_axiom_audit(2, cases=50, seed=5)
    second = algebra_axiom_audit(2, cases=50, seed=5)
    assert first == second
    assert cayley_identity_audit(1, 40, 9) == cayley_identity_audit(1, 40, 9)


def test_thread_cap_parsing(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert thread_cap() == 1
    monkeypatch.setenv(THREADS_ENV, "4")
    assert thread_cap() == 4
    monkeypatch.setenv(THREADS_ENV, "0")
    assert thread_cap() == 1
    monkeypatch.setenv(THREADS_ENV, "lots")
    assert thread_cap() == 1


def test_parallel_map_preserves_order(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "8")
    assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]


def test_threaded_run_matches_sequential(monkeypatch):
    request = VerifyRequest(
        suites=["proposition", "chiral", "factorization"], source="both"
    )
    monkeypatch.delenv(THREADS_ENV, raising=False)
    sequential = run_suites(request)
    monkeypatch.setenv(THREADS_ENV, "4")
    threaded = run_suites(request)
    assert sequential.reports == threaded.reports
    assert sequential.overall == threaded.overall


def test_dispersion_suite_degenerate_at_pole():
    result = run_suites(VerifyRequest(suites=["dispersion"], m="1/2", h="1", omega=["1"]))
    verdicts = {r.claim: r.verdict for r in result.reports}
    assert verdicts["laplacian-symbol"] == HOLDS
    assert verdicts["dispersion-root"] == DEGENERATE  # 1 - 2hm = 0
    assert verdicts["fermion-doubling"] == HOLDS
    assert result.overall == HOLDS


def test_dispersion_suite_with_regular_mass():
    result = run_suites(VerifyRequest(suites=["dispersion"], m="1/5", h="1", omega=["1"]))
    verdicts = {r.claim: r.verdict for r in result.reports}
    assert verdicts["dispersion-root"] == HOLDS


def test_massless_suite_degenerate_parameters():
    # h = 2, omega = 1: the k = 1 step hits h*m_k*omega = 1 exactly
    result = run_suites(VerifyRequest(suites=["massless"], h="2", omega=["1"]))
    verdicts = {r.claim: r.verdict for r in result.reports}
    assert verdicts["massless-deviation-monotone"] == DEGENERATE
    assert result.overall in (HOLDS, FAILS)  # never crashes
