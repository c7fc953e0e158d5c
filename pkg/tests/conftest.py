import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orbext.orbifold import validate_signature  # noqa: E402


def sig(g, *p):
    return validate_signature(g, list(p))


def random_unimodular(n, rng, steps=8, bound=3):
    """Product of random elementary matrices and sign flips."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-bound, bound)
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    if rng.random() < 0.5:
        k = rng.randrange(n)
        M[k] = [-x for x in M[k]]
    return M


@pytest.fixture
def rng():
    return random.Random(20240607)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
