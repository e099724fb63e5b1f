import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE: list[tuple[int, bool, str]] = []


@pytest.fixture
def record():
    """Log one pass/fail line for an acceptance criterion."""

    def _record(num, ok, detail):
        line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        ACCEPTANCE.append((num, ok, line))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
