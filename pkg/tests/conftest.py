from __future__ import annotations

import json
from pathlib import Path

import pytest

from lices.config import load_config
from lices.pipeline import ConsultationPipeline, counter_ids
from lices.cli import FixtureClock
from datetime import datetime, timezone

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

CLOCK_START = datetime(2026, 1, 15, 9, 0, 0, tzinfo=timezone.utc)


@pytest.fixture()
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture()
def corpus_path() -> Path:
    return FIXTURES / "corpus" / "corpus.jsonl"


@pytest.fixture()
def ground_truth() -> dict:
    return json.loads((FIXTURES / "corpus" / "ground_truth.json").read_text("utf-8"))


@pytest.fixture()
def clean_scenario_dir() -> Path:
    return FIXTURES / "scenarios" / "clean"


def build_pipeline(tmp_path: Path, **overrides) -> ConsultationPipeline:
    """Pipeline over the shipped fixtures with a deterministic clock and ids,
    writing all state under tmp_path."""
    config = load_config(FIXTURES / "config.json")
    config.data_dir = str(tmp_path / "data")
    for key, value in overrides.items():
        setattr(config, key, value)
    return ConsultationPipeline.from_config(
        config,
        clock=FixtureClock(CLOCK_START),
        ids=counter_ids(),
        audit_path=tmp_path / "audit.jsonl",
    )


@pytest.fixture()
def pipeline(tmp_path: Path) -> ConsultationPipeline:
    return build_pipeline(tmp_path)
