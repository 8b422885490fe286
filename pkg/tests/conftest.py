import numpy as np
import pytest

from current_forge.gamma_algebra import build_standard_rep


@pytest.fixture(scope="session")
def rep():
    return build_standard_rep()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split()[0])):
            terminalreporter.write_line(line)
