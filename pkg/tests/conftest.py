from __future__ import annotations

import itertools

import pytest

from dive import analyze, build_lady_ada_fixture
from dive.ingest import FIXTURE_TARGET

TARGET = FIXTURE_TARGET


@pytest.fixture(scope="session")
def fixture_doc():
    return build_lady_ada_fixture()


@pytest.fixture(scope="session")
def fixture_analysis(fixture_doc):
    return analyze(fixture_doc, [TARGET])


def deterministic_app(tmp_path):
    """App with sequential session ids and a frozen clock, for golden tests."""
    from dive.service.app import create_app

    counter = itertools.count(1)
    return create_app(
        str(tmp_path),
        id_factory=lambda: f"s-{next(counter):04d}",
        clock=lambda: 1735689600.0,  # 2025-01-01T00:00:00Z
    )


@pytest.fixture()
def client(tmp_path):
    from fastapi.testclient import TestClient

    with TestClient(deterministic_app(tmp_path)) as c:
        yield c
