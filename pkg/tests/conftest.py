import os
import random
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from germflow import (  # noqa: E402
    Cyclotomic,
    FormalSeries,
    GermMap,
    VectorFieldGerm,
    euler_phi,
    monomials_of_degree,
)

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 5))
nonzero_fracs = small_fracs.filter(lambda x: x != 0)
CONDUCTORS = (3, 4, 5, 7, 8, 9, 12)


@st.composite
def cyclotomics(draw, conductors=CONDUCTORS):
    k = draw(st.sampled_from(conductors))
    coeffs = draw(st.lists(small_fracs, min_size=euler_phi(k), max_size=euler_phi(k)))
    return Cyclotomic(k, coeffs)


def exact_scalars(conductors=(12,)):
    return st.one_of(small_fracs, cyclotomics(conductors))


def random_series(rng, n, order, density=0.5, lo=2, scalars=None):
    """Sparse series in ``n`` variables with terms of degree ``lo..order``."""
    terms = {}
    for d in range(lo, order + 1):
        for e in monomials_of_degree(n, d):
            if rng.random() < density:
                c = scalars(rng) if scalars else Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                if c:
                    terms[e] = c
    return FormalSeries(n, order, terms)


def random_linear(rng, n):
    """Invertible integer-ish matrix rows."""
    while True:
        rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)] for _ in range(n)]
        det = rows[0][0] if n == 1 else rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        if det:
            return rows


def random_germ(rng, n, order, density=0.4, diagonal=None):
    """GermMap with an invertible linear part; ``diagonal`` fixes the multipliers."""
    rows = random_linear(rng, n) if diagonal is None else [
        [diagonal[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)
    ]
    comps = []
    for i in range(n):
        s = random_series(rng, n, order, density)
        lin = {}
        for j in range(n):
            e = [0] * n
            e[j] = 1
            if rows[i][j]:
                lin[tuple(e)] = rows[i][j]
        comps.append(s + FormalSeries(n, order, lin))
    return GermMap(comps)


def random_field(rng, n, order, density=0.4):
    return VectorFieldGerm(random_series(rng, n, order, density) for _ in range(n))


@pytest.fixture
def rng():
    return random.Random(20240611)


seeds = st.integers(0, 2**32 - 1).map(random.Random)


# Acceptance lines recorded by test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
