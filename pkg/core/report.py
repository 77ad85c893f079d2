"""
Report schema and writers.

Every CLI command produces a Report. Reports serialize through pydantic so
the JSON layout is versioned (``"schema": "cheby-report/1"``) and the same
numbers back both the text tables and the ``--json`` output.
"""

import csv
import json
import logging
import math
import uuid
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from config.settings import REPORT_SCHEMA, REPORTS_DIR, TOOL_VERSION, get_setting
from core.bounds import BoundResult
from core.verdict import Direction, Verdict

logger = logging.getLogger(__name__)

ANNOTATION_MAX_DENOMINATOR = 120
ANNOTATION_TOL = 1e-9


def finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def rational_annotation(value: Optional[float]) -> Optional[str]:
    """
    "≈ p/q" when value lies within 1e-9 of a fraction with q <= 120.

    Returns None for missing or non-finite values and for values with no
    such fraction nearby.
    """
    value = finite_or_none(value)
    if value is None:
        return None
    frac = Fraction(value).limit_denominator(ANNOTATION_MAX_DENOMINATOR)
    if abs(float(frac) - value) > ANNOTATION_TOL:
        return None
    if frac.denominator == 1:
        return f"≈ {frac.numerator}"
    return f"≈ {frac.numerator}/{frac.denominator}"


def attains(result: BoundResult, value: Optional[float]) -> bool:
    """True when an applicable bound is met with equality (to numerics.equality_tol)."""
    if not result.applicable or value is None or result.measured is None or not math.isfinite(value):
        return False
    measured = abs(result.measured) if result.direction == Direction.ABS_LE else result.measured
    return abs(measured - value) <= float(get_setting("numerics.equality_tol", 1e-7))


class HypothesisEntry(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class VerdictEntry(BaseModel):
    case_id: str
    T: Optional[float] = None
    bound: Optional[float] = None
    direction: str
    slack: Optional[float] = None
    status: str
    advisory: bool = False
    ratio: Optional[float] = None

    @classmethod
    def from_verdict(cls, verdict: Verdict) -> "VerdictEntry":
        return cls(**verdict.to_dict())


class BoundEntry(BaseModel):
    theorem_id: str
    label: str
    value: Optional[float] = None
    secondary_value: Optional[float] = None
    direction: str
    measured: Optional[float] = None
    applicable: bool
    hypotheses: List[HypothesisEntry] = Field(default_factory=list)
    companions: List[VerdictEntry] = Field(default_factory=list)
    parameters: Dict[str, float] = Field(default_factory=dict)
    annotation: Optional[str] = None
    secondary_annotation: Optional[str] = None
    equality: bool = False
    secondary_equality: bool = False

    @classmethod
    def from_result(cls, result: BoundResult) -> "BoundEntry":
        data = result.to_dict()
        data["parameters"] = {k: v for k, v in data["parameters"].items() if math.isfinite(v)}
        return cls(
            **data,
            annotation=rational_annotation(result.value),
            secondary_annotation=rational_annotation(result.secondary_value),
            equality=attains(result, result.value),
            secondary_equality=attains(result, result.secondary_value),
        )


class ReportInputs(BaseModel):
    f: Optional[str] = None
    g: Optional[str] = None
    a: Optional[float] = None
    b: Optional[float] = None
    theorems: List[str] = Field(default_factory=list)
    alpha: Optional[float] = None
    cases: Optional[int] = None
    iterations: Optional[int] = None
    beta_from: Optional[float] = None
    beta_to: Optional[float] = None
    steps: Optional[int] = None
    out: Optional[str] = None


class Report(BaseModel):
    """Machine-readable result of one CLI command."""

    model_config = ConfigDict(populate_by_name=True)

    schema_id: str = Field(default=REPORT_SCHEMA, alias="schema")
    tool_version: str = TOOL_VERSION
    kind: str
    created_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    seed: Optional[int] = None
    inputs: ReportInputs = Field(default_factory=ReportInputs)
    T: Optional[float] = None
    T_annotation: Optional[str] = None
    bounds: List[BoundEntry] = Field(default_factory=list)
    verdicts: List[VerdictEntry] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    details: Optional[Dict[str, Any]] = None
    exit_code: int = 0

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.model_validate_json(text)

    @classmethod
    def json_schema(cls) -> Dict[str, Any]:
        return cls.model_json_schema(by_alias=True)


def _clean(value: Any) -> Any:
    """Replace non-finite floats by None recursively so JSON stays strict."""
    if isinstance(value, float):
        return finite_or_none(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def bound_report(
    f_text: str,
    g_text: str,
    a: float,
    b: float,
    T: float,
    results: Sequence[BoundResult],
    theorems: Sequence[str],
    alpha: Optional[float],
    verdicts: Sequence[Verdict] = (),
) -> Report:
    failed = sum(1 for v in verdicts if v.failed)
    return Report(
        kind="bound",
        inputs=ReportInputs(f=f_text, g=g_text, a=a, b=b, theorems=list(theorems), alpha=alpha),
        T=finite_or_none(T),
        T_annotation=rational_annotation(T),
        bounds=[BoundEntry.from_result(r) for r in results],
        verdicts=[VerdictEntry.from_verdict(v) for v in verdicts],
        summary={
            "bounds": len(results),
            "applicable": sum(1 for r in results if r.applicable),
            "violations": failed,
        },
        exit_code=1 if failed else 0,
    )


def suite_report(theorem_id: str, cases: int, seed: int, verdicts: Sequence[Verdict], summary) -> Report:
    return Report(
        kind="verify",
        seed=seed,
        inputs=ReportInputs(theorems=[theorem_id], cases=cases),
        verdicts=[VerdictEntry.from_verdict(v) for v in verdicts],
        summary=_clean(summary.to_dict()),
        exit_code=0 if summary.passed else 1,
    )


def sharpness_report(verdicts: Sequence[Verdict], summary) -> Report:
    missed = [v.case_id for v in verdicts if v.status.value != "holds"]
    data = _clean(summary.to_dict())
    data["missed"] = missed
    return Report(
        kind="sharpness",
        verdicts=[VerdictEntry.from_verdict(v) for v in verdicts],
        summary=data,
        exit_code=1 if missed else 0,
    )


def falsify_report(search, seed: int) -> Report:
    data = _clean(search.to_dict())
    data["best_annotation"] = rational_annotation(search.best_ratio)
    return Report(
        kind="falsify",
        seed=seed,
        inputs=ReportInputs(theorems=[search.theorem_id], iterations=search.iterations),
        details=data,
        summary={"exceeded": search.exceeded, "best_ratio": finite_or_none(search.best_ratio)},
        exit_code=1 if search.exceeded else 0,
    )


def hcurve_report(points, beta_from: float, beta_to: float, steps: int, out: Optional[str]) -> Report:
    dh = [p.dh for p in points]
    return Report(
        kind="hcurve",
        inputs=ReportInputs(beta_from=beta_from, beta_to=beta_to, steps=steps, out=out),
        summary={
            "points": len(points),
            "h_min": finite_or_none(min(p.h for p in points)),
            "h_max": finite_or_none(max(p.h for p in points)),
            "dh_positive": all(d > 0 for d in dh),
        },
        details={"points": [[p.beta, p.h, p.dh] for p in points]},
    )


def write_report(report: Report, directory: Optional[Path] = None) -> Path:
    """
    Persist a report as ``<UTC timestamp>-<kind>-<uuid8>.json``.

    Args:
        report: Report to write
        directory: Target directory (defaults to data/REPORTS)

    Returns:
        Path to written file
    """
    directory = Path(directory) if directory else REPORTS_DIR
    directory.mkdir(parents=True, exist_ok=True)

    timestamp = datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S")
    unique_id = str(uuid.uuid4())[:8]
    filepath = directory / f"{timestamp}-{report.kind}-{unique_id}.json"

    with open(filepath, "w", encoding="utf-8") as f:
        f.write(report.to_json())
    logger.info(f"report written to {filepath}")
    return filepath


def read_reports(directory: Optional[Path] = None, limit: int = 20) -> List[Report]:
    """Most recent saved reports first; unreadable files are skipped with a warning."""
    directory = Path(directory) if directory else REPORTS_DIR
    if not directory.exists():
        return []
    files = sorted(directory.glob("*.json"), key=lambda p: p.stat().st_mtime, reverse=True)
    reports = []
    for filepath in files[:limit]:
        try:
            reports.append(Report.from_json(filepath.read_text(encoding="utf-8")))
        except (ValueError, json.JSONDecodeError) as e:
            logger.warning(f"Failed to parse report file {filepath.name}: {e}")
    return reports


def write_hcurve_csv(points, path: Path) -> Path:
    """Write ``beta,h,dh`` rows with a header and LF line endings."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["beta", "h", "dh"])
        for p in points:
            writer.writerow([repr(p.beta), repr(p.h), repr(p.dh)])
    return path
