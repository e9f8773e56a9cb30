import json

import numpy as np
import pytest

from hamrep.report import CheckReport, reports_to_json, sanitize


def test_sanitize_handles_numpy_and_inf():
    out = sanitize({"a": np.float64(1.5), "b": np.inf, "c": [np.int64(2), -np.inf]})
    assert out == {"a": 1.5, "b": "inf", "c": [2, "-inf"]}


def test_passed_and_line():
    r = CheckReport("demo", 0.5, "pass", [])
    assert r.passed
    assert r.line() == "PASS demo: worst_margin=0.5 (pass)"
    f = CheckReport("demo", np.inf, "fail", [])
    assert not f.passed
    assert f.line().startswith("FAIL demo")


def test_free_text_verdicts_count_as_informational():
    r = CheckReport("probe", 1.0, "BLC violated (diverging interior sup)", [])
    assert r.passed


def test_reports_to_json_shape_and_determinism():
    reports = [
        CheckReport("b", 1.0, "pass", [{"x": np.float32(2.0)}]),
        CheckReport("a", -np.inf, "fail", []),
    ]
    doc1 = reports_to_json(reports, command="check", seed=0)
    doc2 = reports_to_json(reports, command="check", seed=0)
    assert doc1 == doc2
    assert doc1.endswith("\n")
    parsed = json.loads(doc1)
    assert parsed["schema"] == 1
    assert parsed["command"] == "check"
    assert [r["check"] for r in parsed["reports"]] == ["b", "a"]
    assert parsed["reports"][1]["worst_margin"] == "-inf"
