#!/usr/bin/env python3
"""Test cases, suite reports, canonical JSON and CSV output"""

import json

import pytest

import reports
from frobenius import ConsistencyError, EngineError
from reports import (
    Case,
    CaseResult,
    RunMeter,
    SuiteReport,
    canonical_json,
    load_report,
    report_rows,
    rows_to_csv,
    sha256_hex,
    write_report,
)


def broken() -> None:
    raise ConsistencyError("defect -1/2")


def test_cases_report_residuals():
    assert Case("ok", lambda: None).run() == CaseResult("ok", True, None)
    assert Case("bad", lambda: "x: 1/1").run() == CaseResult("bad", False, "x: 1/1")
    assert Case("raises", broken).run().residual == "consistency: defect -1/2"


def test_only_the_report_plumbing_is_public():
    assert not hasattr(reports, "run_cases")
    assert not hasattr(reports, "first_residual")


def test_suite_report_round_trip(tmp_path):
    report = SuiteReport("jucys", "eta_n = prod xi_i", [CaseResult("b", False, "r"), CaseResult("a", True)], {"algebra": "P2"})
    assert not report.passed
    assert [c.id for c in report.failures] == ["b"]
    assert report.summary() == "jucys (eta_n = prod xi_i): 1/2 cases pass"
    assert [c["id"] for c in report.to_dict()["cases"]] == ["a", "b"]

    path = tmp_path / "jucys.json"
    digest = write_report(path, report, {"wall_seconds": 0.5})
    assert digest == sha256_hex(path.read_text(encoding="utf-8").rstrip("\n"))
    meta = json.loads((tmp_path / "jucys.meta.json").read_text())
    assert meta["report_sha256"] == digest
    assert "wall_seconds" not in path.read_text()
    assert load_report(path).to_dict() == report.to_dict()
    with pytest.raises(EngineError):
        load_report(tmp_path / "missing.json")


def test_canonical_output_is_stable():
    assert canonical_json({"b": 1, "a": [1, "1/2"]}) == '{"a":[1,"1/2"],"b":1}'
    report = SuiteReport("heisenberg", "", [CaseResult("x", True), CaseResult("y", False, "p: 1/1")])
    assert report_rows(report) == [["x", "pass", ""], ["y", "fail", "p: 1/1"]]
    assert rows_to_csv(["id", "pass", "residual"], report_rows(report)) == "id,pass,residual\nx,pass,\ny,fail,p: 1/1\n"


def test_run_meter_snapshot():
    snapshot = RunMeter().snapshot()
    assert set(snapshot) == {"wall_seconds", "rss_bytes", "rss_delta_bytes"}
    assert snapshot["rss_bytes"] > 0


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
