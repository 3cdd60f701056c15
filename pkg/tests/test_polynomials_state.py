import numpy as np
import pytest
from scipy.special import eval_genlaguerre, eval_hermite

from ncsusy.exppoly import X, ExpPoly, QuadExp, gaussian
from ncsusy.polynomials import hermite, laguerre
from ncsusy.series import ThetaSeries
from ncsusy.state import DECAYING, GROWING, NEUTRAL, State, SusyState, classify_direction, classify_growth, zero_state
from ncsusy.errors import MismatchedTruncation


@pytest.mark.parametrize("n", range(7))
def test_hermite_against_scipy(n):
    u = np.linspace(-2, 2, 9)
    assert np.allclose(hermite(n, X)(u, 0.0), eval_hermite(n, u), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n,alpha", [(0, 0.0), (1, 0.0), (2, 1.0), (3, 2.0), (4, 3.0)])
def test_laguerre_against_scipy(n, alpha):
    u = np.linspace(0, 4, 9)
    got = laguerre(n, alpha, X)(u, 0.0)
    assert np.allclose(got, eval_genlaguerre(n, alpha, u), rtol=1e-12, atol=1e-12)


def test_laguerre_on_series_argument():
    arg = ThetaSeries([X, X * 0.5, ExpPoly()])
    out = laguerre(2, 1.0, arg)
    # d/dt of L_2^1(x + t x/2) at t=0 is (x/2) L_2^1'(x) = (x/2)(x - 3)
    assert np.isclose(out[1](1.3, 0.0), 0.65 * (1.3 - 3))


def test_direction_classes():
    assert classify_direction(-1.0, 5.0) == DECAYING
    assert classify_direction(0.0, 2j) == NEUTRAL
    assert classify_direction(0.0, 0.3) == GROWING
    assert classify_direction(0.2, 0.0) == GROWING


def test_growth_is_worst_case():
    f = gaussian(a_xx=-1.0, a_yy=-1.0) + ExpPoly.exp(QuadExp(a_xx=-1.0, b_y=1j))
    assert classify_growth(f) == {"x": DECAYING, "y": NEUTRAL}


def test_state_basics():
    s = State(ThetaSeries([gaussian(a_xx=-1.0, a_yy=-1.0), X, ExpPoly()]))
    assert s.normalizable and s.K == 2
    assert np.isclose(s.evaluate(0.5, 0.0, 0.1), np.exp(-0.25) + 0.05)
    assert (s - s).is_zero()
    assert (2 * s).close(s + s)
    with pytest.raises(MismatchedTruncation):
        SusyState(s, zero_state(3))
