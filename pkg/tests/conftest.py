import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hybridcurve.builtin import CURVE_SPEC  # noqa: E402
from hybridcurve.io import curve_from_spec  # noqa: E402


@pytest.fixture(scope="session")
def example():
    return curve_from_spec(CURVE_SPEC)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


@pytest.fixture(scope="session")
def t1001():
    return np.linspace(0.0, 2.0 * np.pi, 1001)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion; returns the verdict."""
    def record(number, title: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title} | {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
