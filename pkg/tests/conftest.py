import numpy as np
import pytest

from dea_frontier import Dataset, Point

ACCEPTANCE_LINES = []


def record(criterion, passed, detail=""):
    """Register one acceptance result; printed in the terminal summary."""
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {criterion}  {detail}".rstrip())
    print(ACCEPTANCE_LINES[-1])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_d3(extra=()):
    X = [[1, 4], [2, 2], [4, 1]]
    Y = [[1], [1], [1]]
    ids = ["E", "D", "C"]
    for uid, x, y in extra:
        ids.append(uid)
        X.append(list(x))
        Y.append(list(y))
    return Dataset.from_arrays(np.array(X, float), np.array(Y, float), ids)


G = ("G", (1, 6), (1,))
H = ("H", (1.2, 7), (1,))


@pytest.fixture
def d3():
    return make_d3()


@pytest.fixture
def d3gh():
    return make_d3([G, H])


@pytest.fixture
def single():
    return Dataset.from_arrays([[1.0, 1.0]], [[1.0]], ["S"])


def pt(x, y):
    return Point(x, y)
