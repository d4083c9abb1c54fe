import numpy as np
import pytest

from sgineq.lattice import LatticeElement
from sgineq.semigroup import validate_generator

# Filled by test_acceptance.py; printed as one line per criterion at the
# end of the run so the verdicts survive output capture.
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, desc, ok, detail in sorted(ACCEPTANCE):
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {desc}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def bench_gen():
    return validate_generator([[-1.0, 1.0], [1.0, -1.0]], name="benchmark2")


@pytest.fixture
def bench_f():
    return LatticeElement([4.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240821)
