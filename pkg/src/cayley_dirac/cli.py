"""Command-line front end.

A thin client over the same validated request models and handlers the
HTTP service uses: flags are parsed into a request model, the handler
runs in-process (or remotely with --server), and the response model is
serialized in the requested format.

Exit codes: 0 every audited claim holds (or the command succeeded),
1 an audit failed or the computation hit a pole, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from pydantic import ValidationError

from . import __version__
from .clifford import AlgebraError
from .handlers import (
    cayley_handler,
    dispersion_handler,
    solve_handler,
    stencil_handler,
    verify_handler,
)
from .reporting import (
    dispersion_csv,
    emit_json,
    model_text,
    result_to_model,
    suite_csv,
    suite_text,
)
from .schemas import (
    CayleyRequest,
    DispersionRequest,
    SolveRequest,
    StencilRequest,
    VerifyRequest,
)
from .solutions import HOLDS
from .spectral import DispersionPole

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayley-dirac",
        description="Exact-arithmetic audits of lattice Dirac operators, "
        "Cayley transforms and dispersion relations.",
    )
    parser.add_argument("--version", action="version", version=f"cayley-dirac {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "text", "csv"), default="json", help="output format"
    )
    common.add_argument("--output", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument(
        "--server",
        metavar="URL",
        help="send the request to a running service instead of computing in-process "
        "(response is the server's JSON)",
    )

    solve = sub.add_parser("solve", parents=[common], help="emit the per-axis solution factors")
    solve.add_argument("--h", default="1", help="meshwidth, rational p/q")
    solve.add_argument("--m", default="1/2", help="mass, rational p/q")
    solve.add_argument("--omega", default="1", help="comma-separated unit frame, e.g. 3/5,4/5")
    solve.add_argument("--n", type=int, help="lattice dimension (defaults to len(omega))")
    solve.add_argument("--source", choices=("paper", "derived"), default="derived")

    verify = sub.add_parser("verify", parents=[common], help="run audit suites")
    verify.add_argument(
        "--suite",
        action="append",
        choices=(
            "all",
            "algebra-axioms",
            "cayley-identities",
            "proposition",
            "chiral",
            "factorization",
            "massless",
            "dispersion",
        ),
        help="suite to run (repeatable; default all)",
    )
    verify.add_argument("--h", default="1")
    verify.add_argument("--m", default="1/2")
    verify.add_argument("--omega", default="1")
    verify.add_argument("--n", type=int)
    verify.add_argument("--source", choices=("paper", "derived", "both"), default="derived")
    verify.add_argument("--box", type=int, default=3, help="audit box half-width")
    verify.add_argument("--grid", type=int, default=64, help="zone grid density")
    verify.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")

    stencil = sub.add_parser("stencil", parents=[common], help="print a stencil tap table")
    stencil.add_argument(
        "--op",
        choices=("forward", "backward", "dirac", "laplacian", "dirac-squared"),
        default="dirac",
    )
    stencil.add_argument("--n", type=int, default=1)
    stencil.add_argument("--h", default="1")
    stencil.add_argument("--axis", type=int, default=1)

    cayley = sub.add_parser("cayley", parents=[common], help="Cayley image of t*e_j*e_{n+j}")
    cayley.add_argument("--t", required=True, help="rational parameter p/q")
    cayley.add_argument("--axis", type=int, default=1)
    cayley.add_argument("--n", type=int, default=1)

    dispersion = sub.add_parser(
        "dispersion", parents=[common], help="scan an energy-momentum condition over the zone"
    )
    dispersion.add_argument("--variant", choices=("sine", "tan", "tangent"), default="sine")
    dispersion.add_argument("--m", type=float, default=0.5)
    dispersion.add_argument("--h", default="1")
    dispersion.add_argument("--n", type=int, default=1)
    dispersion.add_argument("--grid", type=int, default=64)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _write(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _remote(args, endpoint: str, payload: dict) -> int:
    import httpx

    url = args.server.rstrip("/") + endpoint
    response = httpx.post(url, json=payload, timeout=600.0)
    _write(response.text + "\n", args.output)
    if response.status_code != 200:
        return EXIT_FAIL
    if endpoint == "/verify":
        overall = response.json().get("overall")
        return EXIT_OK if overall == HOLDS else EXIT_FAIL
    return EXIT_OK


def _split_omega(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


def _run_solve(args) -> int:
    request = SolveRequest(
        n=args.n, h=args.h, m=args.m, omega=_split_omega(args.omega), source=args.source
    )
    if args.server:
        return _remote(args, "/solve", request.model_dump())
    response = solve_handler(request)
    if args.format == "json":
        _write(emit_json(response), args.output)
    elif args.format == "csv":
        rows = ["axis,v,u,t,phi,provenance,on_positive_branch"]
        for f in response.factors:
            t = "infinity" if f.t is None else f.t
            rows.append(
                f"{f.axis},{f.v},{f.u},{t},\"{f.phi}\",{f.provenance},{f.on_positive_branch}"
            )
        _write("\n".join(rows) + "\n", args.output)
    else:
        lines = [
            f"cayley-dirac {response.version} solve "
            f"n={response.n} h={response.h} m={response.m} "
            f"omega={','.join(response.omega)} source={response.source}"
        ]
        for f in response.factors:
            t = "infinity" if f.t is None else f.t
            branch = "+" if f.on_positive_branch else "-"
            lines.append(
                f"axis {f.axis}: phi = {f.phi}  (v={f.v}, u={f.u}, t={t}, branch={branch})"
            )
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _run_verify(args) -> int:
    request = VerifyRequest(
        suites=args.suite or ["all"],
        n=args.n,
        h=args.h,
        m=args.m,
        omega=_split_omega(args.omega),
        source=args.source,
        box=args.box,
        grid=args.grid,
        seed=args.seed,
    )
    if args.server:
        return _remote(args, "/verify", request.model_dump())
    result = verify_handler(request)
    if args.format == "json":
        _write(emit_json(result_to_model(result)), args.output)
    elif args.format == "csv":
        _write(suite_csv(result), args.output)
    else:
        _write(suite_text(result), args.output)
    return EXIT_OK if result.overall == HOLDS else EXIT_FAIL


def _run_stencil(args) -> int:
    request = StencilRequest(op=args.op, n=args.n, h=args.h, axis=args.axis)
    if args.server:
        return _remote(args, "/stencil", request.model_dump())
    response = stencil_handler(request)
    if args.format == "json":
        _write(emit_json(response), args.output)
    elif args.format == "csv":
        rows = ["offset,coeff"]
        for tap in response.taps:
            rows.append(f"{' '.join(str(o) for o in tap.offset)},\"{tap.coeff}\"")
        _write("\n".join(rows) + "\n", args.output)
    else:
        lines = [f"{response.op} stencil, n={response.n}, h={response.h}"]
        for tap in response.taps:
            lines.append(f"  {tuple(tap.offset)} -> {tap.coeff}")
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _run_cayley(args) -> int:
    request = CayleyRequest(t=args.t, axis=args.axis, n=args.n)
    if args.server:
        return _remote(args, "/cayley", request.model_dump())
    response = cayley_handler(request)
    if args.format == "json":
        _write(emit_json(response), args.output)
    else:
        _write(model_text(response, title=f"cayley-dirac {response.version} cayley"), args.output)
    return EXIT_OK


def _run_dispersion(args) -> int:
    request = DispersionRequest(variant=args.variant, m=args.m, h=args.h, n=args.n, grid=args.grid)
    if args.server:
        return _remote(args, "/dispersion", request.model_dump())
    response, scan = dispersion_handler(request, keep_samples=args.format == "csv")
    if args.format == "json":
        _write(emit_json(response), args.output)
    elif args.format == "csv":
        _write(dispersion_csv(scan, response.n), args.output)
    else:
        lines = [
            f"{response.variant} condition, n={response.n}, h={response.h}, "
            f"m={response.m}, grid={response.grid}",
            f"min |residual| = {response.min_abs_residual} at xi = {tuple(response.argmin)}",
            f"sign-change brackets: {len(response.brackets)}",
            f"zero touches: {len(response.zero_touches)}",
            f"root detected: {response.has_root}",
        ]
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _run_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "solve": _run_solve,
    "verify": _run_verify,
    "stencil": _run_stencil,
    "cayley": _run_cayley,
    "dispersion": _run_dispersion,
    "serve": _run_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(loc) for loc in first["loc"]) or "request"
        message = first["msg"]
        for prefix in ("Value error, ", "Assertion failed, "):
            if message.startswith(prefix):
                message = message[len(prefix):]
        sys.stderr.write(f"usage error: {field}: {message}\n")
        return EXIT_USAGE
    except (AlgebraError, DispersionPole) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


def entrypoint() -> None:  # pragma: no cover - console script shim
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
