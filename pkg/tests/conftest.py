import random

import pytest

from multisym import FieldSpec, Point


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_point(rng, n, m, field, lo=-5, hi=5):
    if field.p is not None:
        lo, hi = 0, field.p - 1
    return Point(tuple(tuple(rng.randint(lo, hi) for _ in range(m)) for _ in range(n)), field)


Q = FieldSpec()
F5 = FieldSpec(5)
F7 = FieldSpec(7)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
