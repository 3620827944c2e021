from __future__ import annotations

from pathlib import Path

import pytest

from dejaboom.assets import load_script
from dejaboom.gateway import RuleBasedProvider
from dejaboom.session import Session, start_session, step
from dejaboom.world import WorldSpec, load_bundled_world

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"


@pytest.fixture(scope="session")
def spec() -> WorldSpec:
    return load_bundled_world()


@pytest.fixture(scope="session")
def provider(spec) -> RuleBasedProvider:
    return RuleBasedProvider(spec)


@pytest.fixture
def fresh_session(spec, provider) -> Session:
    return start_session(
        spec, provider, session_id="test", created="2026-01-01T00:00:00+00:00"
    )


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def play(spec, provider, commands, session_id="test") -> Session:
    session = start_session(
        spec, provider, session_id=session_id, created="2026-01-01T00:00:00+00:00"
    )
    for command in commands:
        step(session, command)
    return session


def play_bundled_script(spec, provider, name, session_id="test") -> Session:
    return play(spec, provider, load_script(name), session_id=session_id)
