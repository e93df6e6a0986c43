import zlib
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from zsa import Matrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def Q(rows):
    """Rational matrix from nested lists; strings like "1/3" are allowed."""
    return Matrix(rows)


small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def rational_matrices(draw, rows=None, cols=None, max_dim=5):
    r = rows if rows is not None else draw(st.integers(1, max_dim))
    c = cols if cols is not None else draw(st.integers(1, max_dim))
    flat = draw(st.lists(small_fractions, min_size=r * c, max_size=r * c))
    return Matrix.from_flat(r, c, flat)


@st.composite
def square_pairs(draw, max_dim=5):
    n = draw(st.integers(1, max_dim))
    return draw(rational_matrices(n, n)), draw(rational_matrices(n, n))


@pytest.fixture
def rng(request):
    # one stream per test, stable across runs
    return np.random.default_rng(zlib.crc32(request.node.name.encode()))


def frac(p, q=1):
    return Fraction(p, q)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
