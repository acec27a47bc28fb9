import asyncio
import json

import pytest

from app.main import EXIT_ERROR, run_cli
from conftest import SAMPLES


def _run(tmp_path, *argv):
    target = tmp_path / "report.json"
    code = asyncio.run(run_cli(["--report", str(target), *argv]))
    report = json.loads(target.read_text(encoding="utf-8")) if target.exists() else None
    return code, report


def test_check_partial_tilting(tmp_path):
    code, report = _run(tmp_path, "check", str(SAMPLES / "sn2.alg"), str(SAMPLES / "sn2_stalk.cpx"))
    assert code == 0
    assert report["schema"] == 1
    assert report["command"] == "check"
    assert report["verdict"] is True
    assert report["hom_table"] == {"0": 6}
    assert "--report" not in report["argv"]


def test_check_two_term(tmp_path):
    code, report = _run(tmp_path, "check", str(SAMPLES / "sn2.alg"), str(SAMPLES / "sn2_two_term.cpx"))
    assert code == 0
    assert report["length"] == 1
    assert report["complex"]["terms"] == {"-1": ["1"], "0": ["2"]}


def test_symcheck_negative_verdict(tmp_path):
    code, report = _run(tmp_path, "symcheck", str(SAMPLES / "radsq_cycle.alg"))
    assert code == 1
    assert report["verdict"] is False
    assert report["symmetric"] is False


def test_symcheck_corners(tmp_path):
    code, report = _run(tmp_path, "symcheck", str(SAMPLES / "sn2.alg"), "--corners")
    assert code == 0
    assert report["symmetric"] is True
    assert report["corners"] == {"1": True, "2": True}


def test_complete_writes_theta(tmp_path):
    theta = tmp_path / "theta.cpx"
    code, report = _run(
        tmp_path, "complete", str(SAMPLES / "sn2.alg"), str(SAMPLES / "sn2_e1.cpx"), "1", "--theta-out", str(theta)
    )
    assert code == 0
    assert report["tilting"]["verdict"] is True
    assert report["trace_check"]["ok"] is True
    assert theta.read_text(encoding="utf-8") == report["theta"]


def test_pipeline_on_corner(tmp_path):
    code, report = _run(tmp_path, "pipeline", str(SAMPLES / "sn2.alg"), "1", str(SAMPLES / "sn2_corner1.cpx"), "1")
    assert code == 0
    assert report["comparison"]["level"] == "explicit-iso-found"
    assert report["comparison"]["dims"] == [1, 1]
    assert report["end_dim"] == 6


def test_homtable_reports_duality(tmp_path):
    code, report = _run(tmp_path, "homtable", str(SAMPLES / "sn2.alg"), str(SAMPLES / "sn2_two_term.cpx"))
    assert code == 0
    assert report["verdict"] is None
    assert report["hom"] == {"-1": 0, "0": 2, "1": 0}
    assert report["duality_holds"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["pipeline", str(SAMPLES / "sn2.alg"), "", str(SAMPLES / "sn2_corner1.cpx"), "1"],
        ["pipeline", str(SAMPLES / "sn2.alg"), "7", str(SAMPLES / "sn2_corner1.cpx"), "1"],
        ["complete", str(SAMPLES / "sn2.alg"), str(SAMPLES / "sn2_e1.cpx"), "99"],
        ["check", str(SAMPLES / "missing.alg"), str(SAMPLES / "sn2_stalk.cpx")],
    ],
)
def test_errors_exit_two(tmp_path, argv):
    code, report = _run(tmp_path, *argv)
    assert code == EXIT_ERROR
    assert report is None


def test_bad_environment_exits_two(tmp_path, monkeypatch):
    monkeypatch.setenv("TILTWORK_LOG_LEVEL", "chatty")
    code, _ = _run(tmp_path, "symcheck", str(SAMPLES / "sn2.alg"))
    assert code == EXIT_ERROR
