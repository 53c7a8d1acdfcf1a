import random
from fractions import Fraction

import pytest

from indefkahler.linalg import Space

ACCEPTANCE_LINES = []


def record(criterion, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def all_signatures(m):
    out = []
    for k in range(2**m):
        out.append("".join("-" if (k >> i) & 1 else "+" for i in range(m)))
    return out


def random_rational(rng, lo=-20, hi=20, max_den=7):
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_vector(space, rng, lo=-5, hi=5, max_den=4):
    from indefkahler.linalg import Vector

    return Vector(Fraction(rng.randint(lo, hi), rng.randint(1, max_den)) for _ in range(space.dim))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(params=["+-", "++", "-+", "--"])
def space2(request):
    return Space.from_signature(request.param)
