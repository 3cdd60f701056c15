import numpy as np
import pytest
from hypothesis import strategies as st

from ncsusy.exppoly import ExpPoly, QuadExp
from ncsusy.star import StarContext

# a few fixed exponents so random products actually merge terms
EXPONENTS = [
    QuadExp(),
    QuadExp(a_xx=-0.5, a_yy=-0.5),
    QuadExp(a_xx=-1.0, a_yy=-0.3, a_xy=0.2, b_x=0.4),
    QuadExp(a_yy=-0.7, b_x=0.5j),
]

coef = st.complex_numbers(min_magnitude=0.1, max_magnitude=2.0, allow_nan=False, allow_infinity=False)


@st.composite
def exppolys(draw, max_terms=4, max_deg=2):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        q = draw(st.sampled_from(EXPONENTS))
        i = draw(st.integers(0, max_deg))
        j = draw(st.integers(0, max_deg))
        terms[(q, i, j)] = terms.get((q, i, j), 0j) + draw(coef)
    return ExpPoly(terms)


@pytest.fixture
def ctx():
    return StarContext()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
