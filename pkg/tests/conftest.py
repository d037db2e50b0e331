from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from richwords.generators import word_r


@pytest.fixture(scope="session")
def r100k() -> str:
    return word_r("morphic-phi-tau", 100_000)
