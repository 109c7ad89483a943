import numpy as np
import pytest

# (number, title, passed, seconds, budget) per acceptance criterion
ACCEPTANCE_LINES: dict[int, tuple] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        title, ok, seconds, budget = ACCEPTANCE_LINES[num]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] AC{num:02d} {title} ({seconds:.2f} s, budget {budget:g} s)")
