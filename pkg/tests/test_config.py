import pytest

from app.config import load_settings


def test_defaults():
    settings = load_settings()
    assert settings.default_field == "101"
    assert settings.max_stage == 8
    assert settings.log_level == "INFO"
    assert settings.record_timings is False
    assert settings.search.seed == 0
    assert settings.search.sampling_trials == 64
    assert settings.report_path is None


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("TILTWORK_FIELD", " Rational ")
    monkeypatch.setenv("TILTWORK_SEED", "7")
    monkeypatch.setenv("TILTWORK_MAX_STAGE", "3")
    monkeypatch.setenv("TILTWORK_LOG_LEVEL", "debug")
    monkeypatch.setenv("TILTWORK_RECORD_TIMINGS", "yes")
    monkeypatch.setenv("TILTWORK_ISO_BUDGET", "10")

    settings = load_settings()
    assert settings.default_field == "rational"
    assert settings.search.seed == 7
    assert settings.max_stage == 3
    assert settings.log_level == "DEBUG"
    assert settings.record_timings is True
    assert settings.search.iso_budget == 10


@pytest.mark.parametrize(
    "name, value, message",
    [
        ("TILTWORK_LOG_LEVEL", "loud", "TILTWORK_LOG_LEVEL"),
        ("TILTWORK_MAX_STAGE", "-1", "non-negative"),
        ("TILTWORK_SEED", "abc", "must be an integer"),
        ("TILTWORK_SAMPLING_TRIALS", "0", "must be positive"),
    ],
)
def test_bad_values(monkeypatch, name, value, message):
    monkeypatch.setenv(name, value)
    with pytest.raises(RuntimeError, match=message):
        load_settings()
