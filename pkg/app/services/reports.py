"""Report payloads for the command line, rendered as JSON."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .algebra import Algebra, LinearForm
from .complexes import ProjComplex
from .formats import complex_to_text, element_to_text
from .recollement import AeaCheck, ExtReport, PipelineResult, QuotientComparison, RecollementCheck
from .tilting import CompletionTrace, PartialTiltingCert, TiltingReport, TraceCheck

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class ReportService:
    """Builds the JSON-ready pieces of a report."""

    @staticmethod
    def envelope(command: str, argv: List[str], verdict: Optional[bool], exit_code: int, payload: Dict[str, Any]) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "command": command,
            "argv": list(argv),
            "verdict": verdict,
            "exit_code": exit_code,
            **payload,
        }

    @staticmethod
    def table(values: Dict[int, Any]) -> Dict[str, Any]:
        """Integer-keyed table with string keys."""
        return {str(k): v for k, v in sorted(values.items())}

    @staticmethod
    def complex_summary(X: ProjComplex) -> Dict[str, Any]:
        A = X.algebra
        return {
            "algebra": A.name,
            "terms": {str(d): [A.vertex_names[v] for v in vs] for d, vs in sorted(X.terms.items())},
            "minimal": X.is_minimal(),
        }

    @staticmethod
    def certificate(cert: PartialTiltingCert) -> Dict[str, Any]:
        return {
            "partial_tilting": cert.verdict,
            "hom_table": ReportService.table(cert.table),
            "nonvanishing": cert.nonvanishing,
        }

    @staticmethod
    def tilting(report: TiltingReport) -> Dict[str, Any]:
        out = {
            "verdict": report.verdict,
            "self_hom": ReportService.table(report.vanishing.table),
            "generation": report.generation_mode.value,
            "generates": report.generation,
            "n_types": report.n_types,
            "n_algebra": report.n_algebra,
            "lattice_spans": report.lattice_spans,
        }
        if report.witness is not None:
            out["witness"] = report.witness
        if report.missing_types:
            out["missing_types"] = report.missing_types
        return out

    @staticmethod
    def trace_check(check: TraceCheck) -> Dict[str, Any]:
        return {
            "ok": check.ok,
            "cones": check.cones,
            "minimizations": check.minimizations,
            "covers_minimal": check.covers_minimal,
            "vanishing": check.vanishing,
            "stability": check.stability,
            "vanishing_tables": {str(n): ReportService.table(t) for n, t in sorted(check.vanishing_tables.items())},
        }

    @staticmethod
    def trace(trace: CompletionTrace) -> Dict[str, Any]:
        return {
            "r": trace.r,
            "top_degree": trace.top_degree,
            "stages": trace.length,
            "base_is_algebra": trace.base_is_algebra,
            "ladder": trace.ladder(),
            "normalized": ReportService.complex_summary(trace.normalized),
        }

    @staticmethod
    def symmetry(A: Algebra, form: Optional[LinearForm]) -> Dict[str, Any]:
        out: Dict[str, Any] = {"algebra": A.name, "dim": A.dim, "symmetric": form is not None}
        if form is not None:
            out["form"] = element_to_text(A, form.coefficients)
        return out

    @staticmethod
    def comparison(comparison: QuotientComparison) -> Dict[str, Any]:
        left, right = comparison.fingerprints
        out = {
            "level": comparison.level.value,
            "dims": list(comparison.dims),
            "fingerprints": {
                "left": {"dim": left.dim, "center": left.center, "cartan": [list(r) for r in left.cartan], "layers": list(left.layers)},
                "right": {"dim": right.dim, "center": right.center, "cartan": [list(r) for r in right.cartan], "layers": list(right.layers)},
            },
        }
        if comparison.isomorphism is not None:
            F = comparison.left.field
            out["isomorphism"] = [[F.to_json(v) for v in row] for row in np.asarray(comparison.isomorphism)]
        return out

    @staticmethod
    def recollement(check: RecollementCheck) -> Dict[str, Any]:
        out = {
            "verdict": check.verdict,
            "subset": list(check.subset),
            "first": list(check.first),
            "second": list(check.second),
            "idempotent_ok": check.idempotent_ok,
            "f": element_to_text(check.end.algebra, check.idempotent),
        }
        if check.corner_report is not None:
            out["corner"] = ReportService.tilting(check.corner_report)
        return out

    @staticmethod
    def pipeline(result: PipelineResult) -> Dict[str, Any]:
        return {
            "subset": list(result.subset),
            "corner": ReportService.tilting(result.corner_report),
            "trace": ReportService.trace(result.trace),
            "trace_check": ReportService.trace_check(result.trace_check),
            "tilting": ReportService.tilting(result.report),
            "end_dim": result.end.algebra.dim,
            "f_summands": list(result.f_summands),
            "recollement": ReportService.recollement(result.recollement),
            "comparison": ReportService.comparison(result.comparison),
            "theta": complex_to_text(result.theta),
        }

    @staticmethod
    def aea(check: AeaCheck) -> Dict[str, Any]:
        return {"image_dim": check.image_dim, "ideal_dim": check.ideal_dim, "quotient_dim": check.quotient_dim, "ok": check.ok}

    @staticmethod
    def ext(report: ExtReport) -> Dict[str, Any]:
        return {
            "ext": ReportService.table(report.table),
            "vanishing_up_to": report.vanishing_up_to,
            "quotient_dim": report.quotient_dim,
            "completion_tilting": ReportService.table(report.completion),
        }


def render(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_report(report: Dict[str, Any], path: Optional[str]) -> None:
    text = render(report)
    if path is None:
        print(text, end="")
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.info("report written to %s", path)
