from __future__ import annotations

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# one line per acceptance criterion, printed at the end of the session
AC_LINES: dict[int, str] = {}


def record_ac(number: int, passed: bool, detail: str) -> None:
    line = f"AC{number:<2} {'PASS' if passed else 'FAIL'}  {detail}"
    AC_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if AC_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(AC_LINES):
            terminalreporter.write_line(AC_LINES[number])
