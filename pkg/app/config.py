import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

TRUTHY = {"1", "true", "yes", "on"}
LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


@dataclass(frozen=True)
class SearchSettings:
    """Knobs for the randomized searches inside the engine."""

    seed: int = 0
    sampling_trials: int = 64
    exhaustive_limit: int = 16
    iso_budget: int = 2000


DEFAULT_SEARCH = SearchSettings()


@dataclass(frozen=True)
class Settings:
    default_field: str
    max_stage: int
    log_level: str
    record_timings: bool
    search: SearchSettings
    report_path: Optional[str] = None


def load_settings() -> Settings:
    # Allow .env usage for local development while still respecting env vars.
    load_dotenv()

    default_field = (os.getenv("TILTWORK_FIELD") or "101").strip().lower()
    log_level = (os.getenv("TILTWORK_LOG_LEVEL") or "INFO").strip().upper()
    timings_raw = (os.getenv("TILTWORK_RECORD_TIMINGS") or "false").strip().lower()

    if log_level not in LOG_LEVELS:
        raise RuntimeError(f"TILTWORK_LOG_LEVEL must be one of {sorted(LOG_LEVELS)}.")

    seed = _int_setting("TILTWORK_SEED", "0")
    max_stage = _int_setting("TILTWORK_MAX_STAGE", "8")
    trials = _int_setting("TILTWORK_SAMPLING_TRIALS", "64")
    exhaustive = _int_setting("TILTWORK_EXHAUSTIVE_LIMIT", "16")
    iso_budget = _int_setting("TILTWORK_ISO_BUDGET", "2000")

    if max_stage < 0:
        raise RuntimeError("TILTWORK_MAX_STAGE must be non-negative.")
    if trials < 1 or iso_budget < 1:
        raise RuntimeError(
            "TILTWORK_SAMPLING_TRIALS and TILTWORK_ISO_BUDGET must be positive."
        )

    return Settings(
        default_field=default_field,
        max_stage=max_stage,
        log_level=log_level,
        record_timings=timings_raw in TRUTHY,
        search=SearchSettings(
            seed=seed,
            sampling_trials=trials,
            exhaustive_limit=exhaustive,
            iso_budget=iso_budget,
        ),
    )


def _int_setting(name: str, default: str) -> int:
    raw = os.getenv(name, default).strip()
    try:
        return int(raw)
    except ValueError:
        raise RuntimeError(f"{name} must be an integer, got: {raw}")
