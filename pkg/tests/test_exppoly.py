import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncsusy.exppoly import ONE, X, Y, ExpPoly, QuadExp, ep_close, ep_deriv, ep_eval, ep_mul, gaussian

from conftest import exppolys


def test_products():
    assert ep_close(ep_mul(X, Y), ExpPoly.monomial(1, 1))
    g = ep_mul(gaussian(a_xx=-0.3), gaussian(a_yy=-0.2))
    assert ep_close(g, gaussian(a_xx=-0.3, a_yy=-0.2))
    assert ep_close(ep_mul(X + Y, X - Y), X * X - Y * Y)


def test_derivatives():
    g = gaussian(a_xx=-0.7)
    assert ep_close(ep_deriv(g, "x", 1), X * g * (-1.4))
    assert ep_close(ep_deriv(ExpPoly.monomial(2, 3), "y", 1), ExpPoly.monomial(2, 2, 3.0))
    assert ep_close(ep_deriv(g, "x", 0), g)
    with pytest.raises(ValueError):
        ep_deriv(g, "z")


def test_mixed_derivative_against_finite_difference():
    f = gaussian(a_xx=-1, a_yy=-1, a_xy=1)
    x0, y0, h = 0.3, -0.7, 1e-4
    fd = (f(x0 + h, y0 + h) - f(x0 + h, y0 - h) - f(x0 - h, y0 + h) + f(x0 - h, y0 - h)) / (4 * h * h)
    assert abs(ep_eval(f.deriv("x").deriv("y"), x0, y0) - fd) < 1e-6


def test_evaluation():
    assert ep_eval(X * Y, 2, 3) == pytest.approx(6)
    assert ep_eval(gaussian(a_xx=-1), 1, 0) == pytest.approx(np.exp(-1))


def _slow_eval(f, x, y):
    total = 0j
    for (q, i, j), c in f.terms.items():
        total += c * x**i * y**j * np.exp(q(x, y))
    return total


def test_random_evaluation_second_path(rng):
    for _ in range(20):
        terms = {}
        for _ in range(5):
            q = QuadExp(*(rng.normal(size=6) * [0.2, 0.2, 0.1, 0.5, 0.5, 0.3] - [0.5, 0.5, 0, 0, 0, 0]))
            terms[(q, int(rng.integers(0, 3)), int(rng.integers(0, 3)))] = complex(*rng.normal(size=2))
        f = ExpPoly(terms)
        x, y = rng.normal(size=2)
        assert abs(ep_eval(f, x, y) - _slow_eval(f, x, y)) < 1e-12 * max(1, abs(_slow_eval(f, x, y)))


def test_vectorized_evaluation():
    f = X * gaussian(a_yy=-1)
    xs = np.linspace(-1, 1, 5)
    assert np.allclose(f(xs, 0.5), xs * np.exp(-0.25))


def test_close_and_pruning():
    f = X * X + gaussian(a_xx=-1) * 2
    assert ep_close(f, f)
    assert ep_close(f, f + X * 1e-20)
    assert not ep_close(f, f + X * 1e-3)
    assert len(f + X * 1e-20) == len(f) + 1 or ep_close(f + X * 1e-20, f)


def test_key_tolerance_merges_nearby_exponents():
    a = gaussian(a_xx=-0.5)
    b = gaussian(a_xx=-0.5 + 1e-15)
    assert len(a + b) == 1


def test_negative_zero_keys_merge():
    assert QuadExp(b_x=-0.0) == QuadExp(b_x=0.0)
    assert hash(QuadExp(b_x=-0.0)) == hash(QuadExp())


def test_canonical_order_is_deterministic():
    f = gaussian(a_yy=-1) * Y + X * X + gaussian(a_xx=-1)
    g = X * X + gaussian(a_xx=-1) + gaussian(a_yy=-1) * Y
    assert [k for k, _ in f.sorted_terms()] == [k for k, _ in g.sorted_terms()]


def test_conjugate_matches_pointwise():
    f = gaussian(a_xx=-0.5, b_y=0.7j) * (X + 1j * Y)
    assert abs(f.conj()(0.3, 0.4) - np.conj(f(0.3, 0.4))) < 1e-14


@settings(max_examples=30, deadline=None)
@given(exppolys())
def test_mixed_partials_commute(f):
    assert ep_close(f.deriv("x").deriv("y"), f.deriv("y").deriv("x"), 1e-12)


@settings(max_examples=30, deadline=None)
@given(exppolys(), exppolys())
def test_leibniz(f, g):
    lhs = (f * g).deriv("x")
    rhs = f.deriv("x") * g + f * g.deriv("x")
    assert ep_close(lhs, rhs, 1e-12)


@settings(max_examples=20, deadline=None)
@given(exppolys(), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_derivative_against_central_difference(f, x0, y0):
    h = 1e-5
    for axis, (dx, dy) in (("x", (h, 0)), ("y", (0, h))):
        fd = (f(x0 + dx, y0 + dy) - f(x0 - dx, y0 - dy)) / (2 * h)
        exact = f.deriv(axis)(x0, y0)
        assert abs(exact - fd) < 1e-6 * max(1.0, abs(exact))
