"""Request handlers shared by the HTTP service and the CLI.

Every endpoint/subcommand is a pure function from a validated request
model to a response model, so the CLI stays a thin client over exactly
the machinery the service exposes.
"""

from __future__ import annotations

from . import __version__
from .clifford import render
from .conformal import Spin2Vector, cayley, stereographic
from .lattice import LatticeGeometry, MassVector, dirac_stencil, diff_stencil, laplacian_stencil
from .schemas import (
    CayleyRequest,
    CayleyResponse,
    DispersionRequest,
    DispersionResponse,
    FactorModel,
    SolveRequest,
    SolveResponse,
    StencilRequest,
    StencilResponse,
    TapModel,
    VerifyRequest,
)
from .solutions import AxisFactor, solve_factors
from .spectral import ScanReport, brillouin_scan
from .suites import SuiteResult, run_suites


def _factor_model(factor: AxisFactor) -> FactorModel:
    if factor.z is None:
        t = None
        z_text = "infinity"
    else:
        t = str(factor.z.t)
        z_text = render(factor.z.to_multivector())
    return FactorModel(
        axis=factor.axis,
        v=str(factor.phi.v),
        u=str(factor.phi.u),
        phi=render(factor.phi_multivector()),
        t=t,
        z=z_text,
        provenance=factor.provenance,
        on_positive_branch=factor.phi.on_positive_branch,
    )


def solve_handler(request: SolveRequest) -> SolveResponse:
    geometry = LatticeGeometry(request.n, request.h_fraction())
    mass = MassVector(request.m_fraction(), request.omega_fractions())
    factors = solve_factors(geometry, mass, request.source)
    return SolveResponse(
        version=__version__,
        n=geometry.n,
        h=str(geometry.h),
        m=str(mass.m),
        omega=[str(w) for w in mass.omega],
        source=request.source,
        factors=[_factor_model(f) for f in factors],
    )


def verify_handler(request: VerifyRequest) -> SuiteResult:
    return run_suites(request)


def stencil_handler(request: StencilRequest) -> StencilResponse:
    geometry = LatticeGeometry(request.n, request.h_fraction())
    if request.op == "forward":
        stencil = diff_stencil(geometry, request.axis, "forward")
    elif request.op == "backward":
        stencil = diff_stencil(geometry, request.axis, "backward")
    elif request.op == "dirac":
        stencil = dirac_stencil(geometry)
    elif request.op == "laplacian":
        stencil = laplacian_stencil(geometry)
    elif request.op == "dirac-squared":
        dirac = dirac_stencil(geometry)
        stencil = dirac.compose(dirac)
    else:  # pragma: no cover - schema forbids
        raise ValueError(f"unknown stencil op {request.op!r}")
    taps = [
        TapModel(offset=list(offset), coeff=render(stencil.tap(offset)))
        for offset in stencil.offsets()
    ]
    return StencilResponse(
        version=__version__, op=request.op, n=geometry.n, h=str(geometry.h), taps=taps
    )


def cayley_handler(request: CayleyRequest) -> CayleyResponse:
    z = Spin2Vector(request.n, request.axis, request.t_fraction())
    plane = stereographic(z)
    phi = cayley(z.to_multivector())
    if phi != plane.to_multivector():
        raise ArithmeticError("Cayley image disagrees with its parametrization")
    return CayleyResponse(
        version=__version__,
        n=request.n,
        axis=request.axis,
        t=str(z.t),
        z=render(z.to_multivector()),
        phi=render(phi),
        v=str(plane.v),
        u=str(plane.u),
        on_pseudo_sphere=plane.on_pseudo_sphere,
        on_positive_branch=plane.on_positive_branch,
    )


def dispersion_handler(
    request: DispersionRequest, keep_samples: bool = False
) -> tuple[DispersionResponse, ScanReport]:
    geometry = LatticeGeometry(request.n, request.h_fraction())
    scan = brillouin_scan(
        geometry, request.m, request.variant, request.grid, keep_samples=keep_samples
    )
    response = DispersionResponse(
        version=__version__,
        variant=request.variant,
        m=request.m,
        h=str(geometry.h),
        n=geometry.n,
        grid=request.grid,
        min_abs_residual=scan.min_abs_residual,
        argmin=list(scan.argmin),
        brackets=[[list(a), list(b)] for a, b in scan.brackets],
        zero_touches=[list(x) for x in scan.zero_touches],
        has_root=scan.has_root,
    )
    return response, scan
