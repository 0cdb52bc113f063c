import re
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import settings

from simplexdyn.numerics import PrecisionPolicy

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def policy():
    return PrecisionPolicy(512)


def leibniz_det(m):
    """Exact determinant by the permutation expansion; an oracle independent of
    the elimination kernel."""
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= Fraction(m[i][j])
        total += term
    return total


def close(x, y, tol):
    return abs(x - y) <= tol


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}
_RAN = set()
_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m and report.when == "call":
        _RAN.add(int(m.group(1)))


def pytest_terminal_summary(terminalreporter):
    if not _RAN:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RAN):
        if n in ACCEPTANCE:
            ok, detail = ACCEPTANCE[n]
            terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            terminalreporter.write_line(f"criterion {n:>2}: FAIL  (raised before reporting)")
