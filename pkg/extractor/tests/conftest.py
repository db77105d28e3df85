import os

# Model loading in tests must never touch the network; everything runs off
# the checked-in fixture checkpoint.
os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")

from pathlib import Path

import pytest

from crossqe_extract import ExtractionConfig, MlmSession

FIXTURES = Path(__file__).parent / "fixtures"
TINY_MODEL = FIXTURES / "tiny-mlm"
TEN = FIXTURES / "ten"


@pytest.fixture(scope="session")
def session() -> MlmSession:
    config = ExtractionConfig(model=str(TINY_MODEL), layer=3, max_len=32, batch_size=4)
    return MlmSession.load(config)


@pytest.fixture(scope="session")
def ten_paths() -> dict[str, str]:
    return {
        "src": str(TEN / "src.txt"),
        "mt": str(TEN / "mt.txt"),
        "align": str(TEN / "align.txt"),
        "da": str(TEN / "da.txt"),
    }
