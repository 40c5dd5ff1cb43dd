import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dipolar_rotors.config import RotorPairConfig  # noqa: E402


@pytest.fixture(scope="session")
def cfg_free():
    return RotorPairConfig("A", 0.0, 10.0)


@pytest.fixture(scope="session")
def cfg_a30():
    return RotorPairConfig("A", 30.0, 10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdicts (one line per criterion) at the end of the run."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
