import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

FIXTURES = ROOT / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    monkeypatch.setenv("WICKROT_THREADS", "1")
    monkeypatch.delenv("WICKROT_DEBUG_LOGS", raising=False)
