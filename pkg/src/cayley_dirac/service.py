"""FastAPI service exposing the audit machinery.

Endpoints mirror the CLI subcommands one-to-one; request validation is
the shared pydantic layer, and algebraic poles/degeneracies surface as
HTTP 422 rather than server errors.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .clifford import AlgebraError
from .handlers import (
    cayley_handler,
    dispersion_handler,
    solve_handler,
    stencil_handler,
    verify_handler,
)
from .reporting import result_to_model
from .schemas import (
    CayleyRequest,
    CayleyResponse,
    DispersionRequest,
    DispersionResponse,
    SolveRequest,
    SolveResponse,
    StencilRequest,
    StencilResponse,
    SuiteReportModel,
    VersionResponse,
    VerifyRequest,
)
from .spectral import DispersionPole

app = FastAPI(
    title="cayley-dirac",
    version=__version__,
    description="Exact-arithmetic audits of lattice Dirac operators and Cayley transforms.",
)


@app.exception_handler(AlgebraError)
async def algebra_error_handler(request: Request, exc: AlgebraError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(DispersionPole)
async def dispersion_pole_handler(request: Request, exc: DispersionPole) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/version", response_model=VersionResponse)
def version() -> VersionResponse:
    return VersionResponse(name="cayley-dirac", version=__version__)


@app.post("/solve", response_model=SolveResponse)
def solve(request: SolveRequest) -> SolveResponse:
    return solve_handler(request)


@app.post("/verify", response_model=SuiteReportModel)
def verify(request: VerifyRequest) -> SuiteReportModel:
    return result_to_model(verify_handler(request))


@app.post("/stencil", response_model=StencilResponse)
def stencil(request: StencilRequest) -> StencilResponse:
    return stencil_handler(request)


@app.post("/cayley", response_model=CayleyResponse)
def cayley(request: CayleyRequest) -> CayleyResponse:
    return cayley_handler(request)


@app.post("/dispersion", response_model=DispersionResponse)
def dispersion(request: DispersionRequest) -> DispersionResponse:
    response, _ = dispersion_handler(request)
    return response
