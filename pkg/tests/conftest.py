import math

import numpy as np
import pytest

from gausskuzmin import funcspace as fs
from gausskuzmin.measure import norm_const

_ACCEPTANCE = []


class _Recorder:
    def record(self, number, title, passed, detail=""):
        _ACCEPTANCE.append((number, title, bool(passed), detail))


@pytest.fixture
def acceptance():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {title} -- {detail}")


@pytest.fixture
def eta_rep():
    def make(p, degree=fs.DEFAULT_DEGREE):
        c = norm_const(p)
        return fs.from_callable(lambda x: c / (p + x), degree)

    return make


def bracket_zeta(s, p, n=10**6):
    """Partial sum to n-1 plus integral tails on both sides: lo <= zeta(s, p) <= hi."""
    k = np.arange(p, n, dtype=float)
    partial = math.fsum(k**-float(s))
    integral_tail = n ** (1 - s) / (s - 1)
    return partial + integral_tail, partial + integral_tail + n**-s
