"""Serialization of audit results: JSON, CSV, and human-readable text.

JSON goes through the pydantic response models, whose fixed field order
makes identical configurations produce byte-identical output.  Rationals
are serialized as strings "p/q" everywhere.
"""

from __future__ import annotations

import io
from typing import Optional

from pydantic import BaseModel

from .schemas import AuditReportModel, SuiteReportModel
from .solutions import AuditReport
from .spectral import ScanReport
from .suites import SuiteResult


def audit_to_model(report: AuditReport) -> AuditReportModel:
    return AuditReportModel(
        claim=report.claim,
        params=report.params,
        residual_max=None if report.residual_max is None else str(report.residual_max),
        verdict=report.verdict,
        witness=report.witness,
    )


def result_to_model(result: SuiteResult) -> SuiteReportModel:
    return SuiteReportModel(
        version=result.version,
        config=result.config.model_dump(),
        reports=[audit_to_model(r) for r in result.reports],
        overall=result.overall,
    )


def suite_model_from_json(payload: str) -> SuiteReportModel:
    return SuiteReportModel.model_validate_json(payload)


def emit_json(model: BaseModel) -> str:
    return model.model_dump_json(indent=2) + "\n"


def suite_text(result: SuiteResult) -> str:
    lines = [f"cayley-dirac {result.version}"]
    for report in result.reports:
        params = " ".join(
            f"{k}={v}" for k, v in report.params.items() if k not in ("factors",)
        )
        residual = "-" if report.residual_max is None else str(report.residual_max)
        lines.append(
            f"claim {report.claim} [{params}] residual_max={residual} {report.verdict.upper()}"
        )
        if report.witness:
            lines.append(f"  witness: {report.witness}")
    lines.append(f"overall {result.overall.upper()}")
    return "\n".join(lines) + "\n"


def suite_csv(result: SuiteResult) -> str:
    """Flat residual table: one row per audited point/offset.

    Reports without a point table contribute a single summary row, so
    the row count equals the number of audited locations.
    """
    out = io.StringIO()
    out.write("claim,location,residual\n")
    for report in result.reports:
        if report.table:
            for row in report.table:
                location = row.get("point", row.get("offset", row.get("k", "-")))
                residual = row.get("residual", row.get("coeff", ""))
                if isinstance(location, list):
                    location = " ".join(str(x) for x in location)
                out.write(f"{report.claim},{location},\"{residual}\"\n")
        else:
            residual = "" if report.residual_max is None else str(report.residual_max)
            out.write(f"{report.claim},-,\"{residual}\"\n")
    return out.getvalue()


def dispersion_csv(scan: ScanReport, n: int) -> str:
    out = io.StringIO()
    header = ",".join(f"xi_{j}" for j in range(1, n + 1))
    out.write(f"{header},residual\n")
    for xi, residual in scan.samples:
        coords = ",".join(repr(x) for x in xi)
        out.write(f"{coords},{residual!r}\n")
    return out.getvalue()


def model_text(model: BaseModel, title: Optional[str] = None) -> str:
    """Generic flat key: value rendering for the small responses."""
    lines = [] if title is None else [title]
    for name, value in model.model_dump().items():
        lines.append(f"{name}: {value}")
    return "\n".join(lines) + "\n"
