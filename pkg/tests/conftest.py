from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def synthetic_fixture() -> Path:
    path = FIXTURES / "synthetic_200.jsonl"
    assert path.exists(), "bundled fixture missing; run tools/make_synthetic_fixture.py"
    return path
