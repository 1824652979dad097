import numpy as np
import pytest
from hypothesis import settings

from maxkin import MaxwellParams, SeedSpec, sample_batch

settings.register_profile("default", deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""
    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def big_batch():
    """10**6 velocities at c = 0.5 (unit component variance)."""
    return sample_batch(10**6, MaxwellParams(0.5), SeedSpec(20240601))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
