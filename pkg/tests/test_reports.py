import json

from app.services import is_partial_tilting
from app.services.reports import SCHEMA_VERSION, ReportService, render, write_report


def test_envelope_and_render():
    report = ReportService.envelope("check", ["check", "a.alg"], True, 0, {"b": 1, "a": {"2": 0, "-1": 3}})
    assert report["schema"] == SCHEMA_VERSION
    assert report["command"] == "check"
    assert report["exit_code"] == 0

    text = render(report)
    assert text.endswith("\n")
    assert text == render(dict(reversed(list(report.items()))))
    assert list(json.loads(text)) == sorted(report)


def test_table_keys_are_strings():
    assert ReportService.table({1: 0, -2: 5}) == {"-2": 5, "1": 0}


def test_certificate_payload(two_term):
    payload = ReportService.certificate(is_partial_tilting(two_term))
    assert payload["partial_tilting"] is True
    assert payload["hom_table"] == {"-1": 0, "0": 2, "1": 0}
    assert payload["nonvanishing"] == []


def test_complex_summary(two_term):
    summary = ReportService.complex_summary(two_term)
    assert summary == {"algebra": "sn2", "terms": {"-1": ["1"], "0": ["2"]}, "minimal": True}


def test_write_report(tmp_path, capsys):
    report = ReportService.envelope("symcheck", [], False, 1, {})
    target = tmp_path / "out.json"
    write_report(report, str(target))
    assert json.loads(target.read_text(encoding="utf-8")) == report

    write_report(report, None)
    assert json.loads(capsys.readouterr().out) == report
