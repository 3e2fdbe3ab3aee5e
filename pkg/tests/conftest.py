import random

import pytest

from diagfreg import PolyRing


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_poly(ring: PolyRing, rng: random.Random, terms: int = 4, degree: int = 3, homogeneous=None):
    """A random polynomial with at most ``terms`` terms."""
    out = ring.zero()
    for _ in range(terms):
        if homogeneous is None:
            exp = [rng.randint(0, degree) for _ in range(ring.nvars)]
        else:
            exp = [0] * ring.nvars
            for _ in range(homogeneous):
                exp[rng.randrange(ring.nvars)] += 1
        out = out + ring.monomial(exp, rng.randrange(1, ring.p))
    return out


def pytest_terminal_summary(terminalreporter):
    from diagfreg.groebner import VERIFY_STATS

    terminalreporter.write_line(
        f"Groebner post-check: {VERIFY_STATS['verified']} bases verified, {VERIFY_STATS['failed']} failed"
    )
