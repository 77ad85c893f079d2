"""Test report models, annotations and writers."""

import json
import math
import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import REPORT_SCHEMA
from core.bounds import convex_pair_upper, thm21_bound, thm24_bound
from core.expr import Interval
from core.families import Family, FamilySpec
from core.parser import parse
from core.report import (
    BoundEntry,
    Report,
    _clean,
    bound_report,
    falsify_report,
    hcurve_report,
    rational_annotation,
    read_reports,
    sharpness_report,
    write_hcurve_csv,
    write_report,
)
from core.verify import h_curve, sharpness_suite, summarize, tightness_search

UNIT = Interval(0.0, 1.0)


@pytest.mark.parametrize(
    "value,expected",
    [(1 / 12, "≈ 1/12"), (1 / 72, "≈ 1/72"), (-1 / 12, "≈ -1/12"), (2.0, "≈ 2"), (0.25, "≈ 1/4")],
)
def test_rational_annotation(value, expected):
    assert rational_annotation(value) == expected


@pytest.mark.parametrize("value", [math.sqrt(2), math.pi, math.nan, math.inf, None])
def test_no_annotation(value):
    assert rational_annotation(value) is None


def test_clean_replaces_non_finite():
    assert _clean({"a": math.nan, "b": [math.inf, 1.0], "c": "x"}) == {"a": None, "b": [None, 1.0], "c": "x"}


class TestBoundEntry:
    def test_equality_flags(self):
        entry = BoundEntry.from_result(thm21_bound(parse("x"), parse("x"), UNIT))
        assert entry.equality
        assert entry.secondary_equality
        assert entry.annotation == "≈ 1/12"

    def test_non_finite_parameters_dropped(self):
        entry = BoundEntry.from_result(thm24_bound(parse("x"), parse("x"), UNIT, math.inf))
        assert entry.label == "thm24@inf"
        assert entry.parameters == {}


class TestReport:
    def _bound_report(self, advisory=()):
        result = convex_pair_upper(parse("x^2"), parse("x^2"), UNIT)
        return bound_report(
            "x^2", "x^2", 0.0, 1.0, result.measured, [result], ["convex_upper"], 2.0,
            result.verdicts("convex_upper", advisory),
        )

    def test_hard_violation_sets_exit_code(self):
        report = self._bound_report()
        assert report.exit_code == 1
        assert report.summary["violations"] == 1

    def test_advisory_violation_keeps_exit_zero(self):
        report = self._bound_report(("level1",))
        assert report.exit_code == 0
        assert report.verdicts[0].status == "violated"
        assert report.verdicts[0].advisory

    def test_json_round_trip_uses_schema_key(self):
        report = self._bound_report()
        data = json.loads(report.to_json())
        assert data["schema"] == REPORT_SCHEMA
        assert "schema_id" not in data
        again = Report.from_json(report.to_json())
        assert again.schema_id == REPORT_SCHEMA
        assert again.T == pytest.approx(4 / 45)
        assert again.bounds[0].label == "convex_upper"

    def test_json_schema(self):
        schema = Report.json_schema()
        assert "schema" in schema["properties"]
        assert "bounds" in schema["properties"]

    def test_sharpness_report(self):
        verdicts = sharpness_suite()
        report = sharpness_report(verdicts, summarize(verdicts))
        assert report.exit_code == 0
        assert report.summary["missed"] == []

    def test_falsify_report_is_strict_json(self):
        search = tightness_search(
            "thm21", FamilySpec(Family.CONVEX_POSITIVE_DERIV, coefficient_range=(0.0, 0.0)), iterations=5
        )
        report = falsify_report(search, seed=0)
        data = json.loads(report.to_json())
        assert data["details"]["restart_best"] == [None]
        assert data["summary"]["best_ratio"] is None
        assert report.exit_code == 0

    def test_hcurve_report(self):
        report = hcurve_report(h_curve([1.0, 2.0, 3.0]), 1.0, 3.0, 2, None)
        assert report.summary["points"] == 3
        assert report.summary["dh_positive"] is True
        assert report.summary["h_min"] == pytest.approx(1 / 12)
        assert len(report.details["points"]) == 3


class TestWriters:
    def test_write_report_naming(self, tmp_path):
        path = write_report(Report(kind="sharpness"), tmp_path)
        assert re.fullmatch(r"\d{8}_\d{6}-sharpness-[0-9a-f]{8}\.json", path.name)
        assert json.loads(path.read_text(encoding="utf-8"))["kind"] == "sharpness"

    def test_read_reports_skips_bad_files(self, tmp_path):
        write_report(Report(kind="verify"), tmp_path)
        (tmp_path / "broken.json").write_text("{not json", encoding="utf-8")
        reports = read_reports(tmp_path)
        assert [r.kind for r in reports] == ["verify"]

    def test_read_reports_missing_directory(self, tmp_path):
        assert read_reports(tmp_path / "nope") == []

    def test_hcurve_csv(self, tmp_path):
        path = write_hcurve_csv(h_curve([1.0, 2.0]), tmp_path / "out" / "h.csv")
        raw = path.read_bytes()
        assert b"\r" not in raw
        lines = raw.decode("utf-8").splitlines()
        assert lines[0] == "beta,h,dh"
        assert len(lines) == 3
        beta, h, _ = lines[1].split(",")
        assert float(beta) == 1.0
        assert float(h) == pytest.approx(1 / 12)
