import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncsusy.errors import MismatchedTruncation, NonPositiveLeadingCoefficient, SingularLeadingCoefficient
from ncsusy.series import ThetaSeries, scalar_series, ts_exp, ts_inv, ts_mul, ts_sqrt


def coeffs_close(a, b, tol=1e-12):
    return np.allclose(np.array(a.coeffs), np.array(b, dtype=complex), atol=tol, rtol=0)


def test_difference_of_squares():
    a = scalar_series([1, 1, 0])
    b = scalar_series([1, -1, 0])
    assert coeffs_close(ts_mul(a, b), [1, 0, -1])


def test_hand_cauchy_product():
    assert coeffs_close(ts_mul(scalar_series([1, 2, 1]), scalar_series([3, 1, 0])), [3, 7, 5])


def test_multiplicative_identity():
    a = scalar_series([2, -1, 0.5, 3])
    assert coeffs_close(a * ThetaSeries.constant(1, 3), a.coeffs)


def test_mismatched_orders_raise():
    with pytest.raises(MismatchedTruncation):
        ts_mul(scalar_series([1, 2]), scalar_series([1, 2, 3]))


def test_inverse_geometric_series():
    assert coeffs_close(ts_inv(scalar_series([1, 1, 0, 0])), [1, -1, 1, -1])
    assert coeffs_close(ts_inv(scalar_series([2, 0])), [0.5, 0])
    assert coeffs_close(ts_inv(ThetaSeries.constant(1, 4)), [1, 0, 0, 0, 0])


def test_inverse_singular():
    with pytest.raises(SingularLeadingCoefficient):
        ts_inv(scalar_series([0, 1, 2]))
    with pytest.raises(SingularLeadingCoefficient):
        ts_inv(scalar_series([1e-20, 1, 2]))


def test_sqrt_binomial():
    assert coeffs_close(ts_sqrt(scalar_series([1, 2, 0])), [1, 1, -0.5])


def test_sqrt_constant():
    hbar = 1.3
    assert coeffs_close(ts_sqrt(ThetaSeries.constant(hbar**2, 3)), [hbar, 0, 0, 0])


@pytest.mark.parametrize("r", [0.0, 0.3, 0.5, 0.8])
def test_sqrt_first_order_of_gauge_discriminant(r):
    hbar, e, B = 1.1, 0.7, 1.9
    c = 4 * r * (r - 1) * e * hbar * B
    s = ts_sqrt(scalar_series([hbar**2, -c, 0]))
    # independent oracle: finite difference of the numeric root
    h = 1e-6
    fd = (np.sqrt(hbar**2 - c * h) - np.sqrt(hbar**2 + c * h)) / (2 * h)
    assert abs(s[1] - (-2 * r * (r - 1) * e * B)) < 1e-12
    assert abs(s[1] - fd) < 1e-6


def test_sqrt_rejects_nonpositive():
    with pytest.raises(NonPositiveLeadingCoefficient):
        ts_sqrt(scalar_series([-1, 1]))
    with pytest.raises(NonPositiveLeadingCoefficient):
        ts_sqrt(scalar_series([1j, 1]))


def test_exp_matches_taylor():
    e = ts_exp(scalar_series([0.3, 1, 0, 0]))
    assert coeffs_close(e, np.exp(0.3) * np.array([1, 1, 0.5, 1 / 6]))


def test_shift_and_truncate():
    a = scalar_series([1, 2, 3])
    assert coeffs_close(a.shift(1), [0, 1, 2])
    assert coeffs_close(a.truncate(1), [1, 2])
    assert coeffs_close(a.truncate(4), [1, 2, 3, 0, 0])


def test_immutable():
    a = scalar_series([1, 2])
    with pytest.raises(AttributeError):
        a.coeffs = (0,)


series_st = st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                     min_size=5, max_size=5)


@settings(max_examples=40, deadline=None)
@given(series_st, st.floats(0.5, 3.0))
def test_inverse_property(cs, lead):
    a = scalar_series([lead] + cs[1:])
    unit = ts_mul(a, ts_inv(a))
    assert coeffs_close(unit, [1, 0, 0, 0, 0], tol=1e-12 * max(1, a.max_abs()) ** 5)


@settings(max_examples=40, deadline=None)
@given(series_st, st.floats(0.5, 3.0))
def test_sqrt_property(cs, lead):
    a = scalar_series([lead] + cs[1:])
    s = ts_sqrt(a)
    assert coeffs_close(ts_mul(s, s), a.coeffs, tol=1e-12 * max(1, a.max_abs()) ** 4)


@settings(max_examples=30, deadline=None)
@given(series_st, series_st)
def test_truncation_consistency(ca, cb):
    a, b = scalar_series(ca), scalar_series(cb)
    big = ts_mul(a.truncate(7), b.truncate(7)).truncate(4)
    assert coeffs_close(big, ts_mul(a, b).coeffs, tol=1e-12)
