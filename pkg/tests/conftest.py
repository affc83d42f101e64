import json
import time

import pytest

from torusquot.corpus import random_corpus
from torusquot.lattice import IntMatrix

ACCEPTANCE: dict = {}

EX1 = [[-1, 1, 0, 0], [0, 0, -1, 1]]
EX2 = [[-1, 0, 2, 2], [0, -2, 5, 5]]
EX3 = [[3, 0, -4, 6], [1, -3, 0, 0]]
MIN1 = [[-2, 9, 9]]
# the stabilizer of the case-two step is C* x Z/2
DISCONNECTED = [[0, 0, -1, 1], [-2, -3, 0, 4]]
# same, and the twisted successor still has a type-O slice
DISCONNECTED_NONMINIMAL = [[0, -3, 4, 1, -1], [0, 0, -4, 0, 1], [-1, 4, -2, 0, 3]]


def M(rows):
    return IntMatrix.from_rows(rows)


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(1000, seed=0)


@pytest.fixture
def write_doc(tmp_path):
    def write(name, rows, **extra):
        doc = {"version": 1, "l": len(rows), "n": len(rows[0]) if rows else 0, "matrix": rows, **extra}
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)
    return write


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def record(criterion: int, title: str, ok: bool, elapsed: float, limit: float):
    ACCEPTANCE[criterion] = (title, ok and elapsed < limit, elapsed, limit)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        title, ok, elapsed, limit = ACCEPTANCE[k]
        terminalreporter.write_line(
            f"criterion {k} {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.1f}s, limit {limit:.0f}s)"
        )
